#include <algorithm>
#include <cmath>
#include <optional>

#include "mcdc/fitness.hpp"
#include "mcdc/search.hpp"

namespace mcdc {

std::string_view status_name(SearchStatus s) {
    switch (s) {
        case SearchStatus::Solved: return "solved";
        case SearchStatus::BudgetExhausted: return "budget_exhausted";
        case SearchStatus::ConflictSuspected: return "conflict_suspected";
    }
    return "?";
}

namespace {

bool has_dependent_group(const std::vector<std::vector<std::size_t>>& groups) {
    return std::any_of(groups.begin(), groups.end(), [](const auto& g) { return g.size() >= 2; });
}

std::size_t watchdog_checkpoint(std::size_t budget) { return (budget + 1) / 2; }

// best[i]: best-so-far after i+1 evaluations, at least up to the checkpoint.
bool stagnated(const std::vector<double>& best, std::size_t budget) {
    std::size_t t = watchdog_checkpoint(budget);
    std::size_t window = std::max<std::size_t>(1, budget / 4);
    std::size_t from = t > window ? t - window : 1;
    double before = best[from - 1], now = best[t - 1];
    return before - now <= kStagnationTolerance * before;
}

using Clock = std::chrono::steady_clock;

// Counts evaluations, tracks the best-so-far, and decides when to stop.
class Runner {
public:
    Runner(const McdcVariant& variant, const SearchOptions& options, bool watchdog)
        : variant_(variant), options_(options), dependent_(watchdog && has_dependent_group(variant.dependent_groups)),
          start_(Clock::now()) {}

    // Fitness value of `cfg`; sets done() when the run must stop.
    double eval(const ObjectConfiguration& cfg) {
        Fitness f = evaluate(variant_.expr, cfg);
        ++iterations_;
        if (options_.record_trace) result_.trace.push_back(f.value);
        if (!best_ || f.value < *best_) {
            best_ = f.value;
            result_.cfg = cfg;
        }
        if (dependent_ && iterations_ <= watchdog_checkpoint(options_.budget)) best_history_.push_back(*best_);
        if (f.solved) {
            finish(SearchStatus::Solved);
        } else if (iterations_ >= options_.budget) {
            finish(SearchStatus::BudgetExhausted);
        } else if (dependent_ && iterations_ == watchdog_checkpoint(options_.budget) &&
                   stagnated(best_history_, options_.budget)) {
            finish(SearchStatus::ConflictSuspected);
        }
        return f.value;
    }

    bool done() const { return done_; }

    SearchResult take() {
        if (!done_) finish(SearchStatus::BudgetExhausted);
        return std::move(result_);
    }

private:
    void finish(SearchStatus s) {
        done_ = true;
        result_.status = s;
        result_.iterations = iterations_;
        result_.best_fitness = best_.value_or(0.0);
        result_.elapsed = Clock::now() - start_;
    }

    const McdcVariant& variant_;
    const SearchOptions& options_;
    bool dependent_;
    Clock::time_point start_;
    std::size_t iterations_ = 0;
    std::vector<double> best_history_;
    std::optional<double> best_;
    bool done_ = false;
    SearchResult result_;
};

bool structural(const Gene& g) { return g.kind == GeneKind::Presence || g.kind == GeneKind::CollectionSize; }

class Avm {
public:
    Avm(const SearchSpace& space, Runner& run, const SearchOptions& options, ObjectConfiguration seed)
        : space_(space), run_(run), options_(options), rng_(options.rng_seed), cur_(std::move(seed)) {}

    void solve() {
        space_.prepare(cur_);
        fit_ = run_.eval(cur_);
        double real_step = 1.0;
        while (!run_.done()) {
            bool improved = false;
            bool has_real = false;
            std::vector<Gene> genes = space_.genes(cur_);
            for (std::size_t i = 0; i < genes.size() && !run_.done(); ++i) {
                const Gene g = genes[i];
                if (g.kind == GeneKind::Numeric && !g.integer) has_real = true;
                bool moved = g.kind == GeneKind::Numeric ? numeric(g, g.integer ? 1.0 : real_step) : categorical(g);
                improved = improved || moved;
                if (moved && structural(g)) genes = space_.genes(cur_);
            }
            if (run_.done() || improved) continue;
            if (has_real && real_step > space_.options().real_precision) {
                real_step = space_.options().real_precision;
                continue;
            }
            real_step = 1.0;
            space_.sample(cur_, rng_, options_.restart_ranges);
            fit_ = run_.eval(cur_);
        }
    }

private:
    double clamp_to(const Gene& g, double x) const {
        x = std::clamp(x, g.domain.lo, g.domain.hi);
        if (g.integer) return std::trunc(x);
        double p = space_.options().real_precision;
        return std::clamp(std::round(x / p) * p, g.domain.lo, g.domain.hi);
    }

    Value numeric_value(const Gene& g, double x) const {
        if (g.integer) return static_cast<std::int64_t>(x);
        return x;
    }

    // Sets g to x; keeps it when fitness strictly improves.
    bool try_value(const Gene& g, double x) {
        Value old = space_.get(cur_, g);
        space_.set(cur_, g, numeric_value(g, x));
        double f = run_.eval(cur_);
        if (f < fit_) {
            fit_ = f;
            return true;
        }
        space_.set(cur_, g, old);
        return false;
    }

    bool numeric(const Gene& g, double delta) {
        bool any = false;
        while (!run_.done()) {
            double x = *as_number(space_.get(cur_, g));
            double dir = 0.0;
            for (double d : {-delta, delta}) {
                double y = clamp_to(g, x + d);
                if (x + d < g.domain.lo || x + d > g.domain.hi || y == x) continue;
                if (try_value(g, y)) {
                    dir = d;
                    break;
                }
                if (run_.done()) return any;
            }
            if (dir == 0.0) return any;
            any = true;
            double step = 2.0 * dir;
            while (!run_.done()) {
                double at = *as_number(space_.get(cur_, g));
                double y = clamp_to(g, at + step);
                if (y == at || !try_value(g, y)) break;
                step *= 2.0;
            }
        }
        return any;
    }

    // Structural moves are reverted by restoring a copy: shrinking discards element values.
    bool try_move(const Gene& g, const Value& v) {
        ObjectConfiguration saved;
        if (structural(g)) saved = cur_;
        Value old = space_.get(cur_, g);
        space_.set(cur_, g, v);
        double f = run_.eval(cur_);
        if (f < fit_) {
            fit_ = f;
            return true;
        }
        if (structural(g))
            cur_ = std::move(saved);
        else
            space_.set(cur_, g, old);
        return false;
    }

    bool categorical(const Gene& g) {
        Value v = space_.get(cur_, g);
        std::vector<Value> moves;
        switch (g.kind) {
            case GeneKind::Boolean:
            case GeneKind::Presence: moves.emplace_back(!std::get<bool>(v)); break;
            case GeneKind::Enumeration: {
                const auto& lits = g.literals;
                auto it = std::find(lits.begin(), lits.end(), std::get<std::string>(v));
                std::size_t k = it == lits.end() ? 0 : static_cast<std::size_t>(it - lits.begin());
                std::size_t n = lits.size();
                if (n < 2) break;
                moves.emplace_back(lits[(k + 1) % n]);
                if (n > 2) moves.emplace_back(lits[(k + n - 1) % n]);
                break;
            }
            case GeneKind::CollectionSize: {
                auto size = std::get<std::int64_t>(v);
                if (size - 1 >= static_cast<std::int64_t>(g.domain.lo)) moves.emplace_back(size - 1);
                if (size + 1 <= static_cast<std::int64_t>(g.domain.hi)) moves.emplace_back(size + 1);
                break;
            }
            case GeneKind::Numeric: break;
        }
        for (const auto& m : moves) {
            if (run_.done()) return false;
            if (try_move(g, m)) return true;
        }
        return false;
    }

    const SearchSpace& space_;
    Runner& run_;
    const SearchOptions& options_;
    std::mt19937_64 rng_;
    ObjectConfiguration cur_;
    double fit_ = 0.0;
};

}  // namespace

bool conflict_watchdog(const std::vector<double>& trace, std::size_t budget,
                       const std::vector<std::vector<std::size_t>>& groups) {
    if (!has_dependent_group(groups) || trace.size() < watchdog_checkpoint(budget)) return false;
    std::vector<double> best;
    for (double f : trace) best.push_back(best.empty() ? f : std::min(best.back(), f));
    return best[watchdog_checkpoint(budget) - 1] > 0.0 && stagnated(best, budget);
}

SearchResult avm_solve(const SearchSpace& space, const McdcVariant& variant, const ObjectConfiguration& seed,
                       const SearchOptions& options) {
    Runner run(variant, options, true);
    if (options.budget == 0) return run.take();
    Avm avm(space, run, options, seed);
    avm.solve();
    return run.take();
}

SearchResult random_solve(const SearchSpace& space, const McdcVariant& variant, const SearchOptions& options) {
    Runner run(variant, options, false);
    std::mt19937_64 rng(options.rng_seed);
    const ObjectConfiguration base = space.initial();
    while (!run.done() && options.budget > 0) {
        ObjectConfiguration cfg = base;
        space.sample(cfg, rng, nullptr);
        run.eval(cfg);
    }
    return run.take();
}

}  // namespace mcdc
