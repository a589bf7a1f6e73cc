#include <algorithm>
#include <atomic>
#include <chrono>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mcdc/bench.hpp"
#include "mcdc/error.hpp"
#include "mcdc/ranges.hpp"
#include "mcdc/reformulate.hpp"
#include "mcdc/stats.hpp"

namespace mcdc {

std::string_view mode_name(Mode m) {
    switch (m) {
        case Mode::Avmo: return "avmo";
        case Mode::Avmc: return "avmc";
        case Mode::Avmr: return "avmr";
        case Mode::Avmrc: return "avmrc";
        case Mode::Rs: return "rs";
    }
    return "?";
}

Mode parse_mode(std::string_view name) {
    for (Mode m : kAllModes)
        if (mode_name(m) == name) return m;
    throw SemanticError("unknown mode '" + std::string(name) + "' (expected avmo, avmc, avmr, avmrc or rs)");
}

std::vector<Mode> parse_modes(std::string_view text) {
    std::vector<Mode> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        auto item = text.substr(start, end - start);
        if (!item.empty()) {
            Mode m = parse_mode(item);
            if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
        }
        start = end + 1;
    }
    if (out.empty()) throw SemanticError("no modes given");
    return out;
}

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string le_bytes(std::uint64_t v) {
    std::string s(8, '\0');
    for (int i = 0; i < 8; ++i) s[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
    return s;
}

bool uses_cbr(Mode m) { return m == Mode::Avmc || m == Mode::Avmrc; }
bool uses_ranges(Mode m) { return m == Mode::Avmr || m == Mode::Avmrc; }

}  // namespace

std::uint64_t trial_seed(std::uint64_t base_seed, std::string_view constraint_id, std::string_view combination,
                         Mode mode, std::size_t rep) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a(h, le_bytes(base_seed));
    h = fnv1a(h, constraint_id);
    h = fnv1a(h, std::string_view("\0", 1));
    h = fnv1a(h, combination);
    h = fnv1a(h, std::string_view("\0", 1));
    h = fnv1a(h, mode_name(mode));
    h = fnv1a(h, le_bytes(rep));
    return splitmix64(h);
}

SearchResult solve_variant(const SearchSpace& space, const McdcVariant& variant, const SolveSettings& settings,
                           const Repository* repo, RangeMap* ranges_used) {
    std::mt19937_64 rng(settings.seed);
    SearchOptions opt;
    opt.budget = settings.budget;
    opt.rng_seed = rng();
    opt.record_trace = settings.record_trace;
    if (settings.mode == Mode::Rs) return random_solve(space, variant, opt);

    ObjectConfiguration seed = space.initial();
    DomainMap reduced;
    if (uses_ranges(settings.mode)) {
        RangeMap ranges = reduce_ranges(variant, settings.scaling, rng(), space.options());
        reduced = ranges.domains();
        if (ranges_used) *ranges_used = std::move(ranges);
        space.sample(seed, rng, &reduced);
        opt.restart_ranges = &reduced;
    } else {
        space.sample(seed, rng);
    }
    if (uses_cbr(settings.mode) && repo) seed = repo->select_seed(variant, seed).seed;
    return avm_solve(space, variant, seed, opt);
}

namespace {

struct Prepared {
    const ocl::OclConstraint* constraint;
    std::vector<McdcVariant> variants;
    std::vector<SearchSpace> spaces;
};

struct Task {
    std::size_t constraint;
    std::size_t mode;
    std::size_t rep;
};

struct TaskResult {
    std::vector<TrialRecord> records;  // one per variant, combination order
    std::string error;
};

TaskResult run_task(const Prepared& p, Mode mode, std::size_t rep, const CampaignOptions& options) {
    TaskResult out;
    Repository repo;
    for (std::size_t vi = 0; vi < p.variants.size(); ++vi) {
        const McdcVariant& v = p.variants[vi];
        TrialRecord rec;
        rec.constraint_id = p.constraint->id;
        rec.combination = combination_label(v.combination);
        rec.mode = mode;
        rec.rep = rep;
        rec.rng_seed = trial_seed(options.base_seed, rec.constraint_id, rec.combination, mode, rep);
        SolveSettings s;
        s.mode = mode;
        s.budget = options.budget;
        s.scaling = options.scaling;
        s.seed = rec.rng_seed;
        auto start = std::chrono::steady_clock::now();
        SearchResult r = solve_variant(p.spaces[vi], v, s, &repo);
        rec.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        rec.status = r.status;
        rec.iterations = r.iterations;
        if (uses_cbr(mode) && r.status == SearchStatus::Solved) repo.store(v, r.cfg);
        out.records.push_back(std::move(rec));
    }
    return out;
}

}  // namespace

Campaign run_campaign(const ClassModel& model, const std::vector<ocl::OclConstraint>& constraints,
                      const CampaignOptions& options) {
    if (options.reps == 0) throw SemanticError("reps must be at least 1");
    if (options.modes.empty()) throw SemanticError("no modes given");
    Campaign out;
    std::vector<Prepared> prepared;
    for (const auto& c : constraints) {
        try {
            Prepared p{&c, reformulate(c), {}};
            for (const auto& v : p.variants) p.spaces.emplace_back(model, v, options.domain);
            prepared.push_back(std::move(p));
        } catch (const Error& e) {
            out.failures.push_back({c.id, e.what()});
        }
    }

    std::vector<Task> tasks;
    for (std::size_t ci = 0; ci < prepared.size(); ++ci)
        for (std::size_t mi = 0; mi < options.modes.size(); ++mi)
            for (std::size_t rep = 0; rep < options.reps; ++rep) tasks.push_back({ci, mi, rep});

    std::vector<TaskResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const Task& t = tasks[i];
            try {
                results[i] = run_task(prepared[t.constraint], options.modes[t.mode], t.rep, options);
            } catch (const std::exception& e) {
                results[i].error = e.what();
            }
        }
    };
    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, tasks.size())));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    // Task index = (constraint * modes + mode) * reps + rep.
    const std::size_t nm = options.modes.size(), nr = options.reps;
    for (std::size_t ci = 0; ci < prepared.size(); ++ci) {
        std::string error;
        for (std::size_t k = 0; k < nm * nr; ++k)
            if (!results[ci * nm * nr + k].error.empty() && error.empty()) error = results[ci * nm * nr + k].error;
        if (!error.empty()) {
            out.failures.push_back({prepared[ci].constraint->id, error});
            continue;
        }
        for (std::size_t vi = 0; vi < prepared[ci].variants.size(); ++vi)
            for (std::size_t mi = 0; mi < nm; ++mi)
                for (std::size_t rep = 0; rep < nr; ++rep)
                    out.records.push_back(results[(ci * nm + mi) * nr + rep].records[vi]);
    }
    return out;
}

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s << "constraint_id,combination,mode,rep,status,iterations,elapsed_ms,rng_seed\n";
    for (const auto& r : records)
        s << r.constraint_id << ',' << r.combination << ',' << mode_name(r.mode) << ',' << r.rep << ','
          << status_name(r.status) << ',' << r.iterations << ',' << std::fixed << std::setprecision(3) << r.elapsed_ms
          << ',' << r.rng_seed << '\n';
    out << s.str();
}

std::optional<double> success_rate(const std::vector<TrialRecord>& records, std::string_view constraint_id,
                                   std::string_view combination, Mode mode) {
    std::size_t n = 0, solved = 0;
    for (const auto& r : records)
        if (r.constraint_id == constraint_id && r.combination == combination && r.mode == mode) {
            ++n;
            solved += r.status == SearchStatus::Solved;
        }
    if (n == 0) return std::nullopt;
    return static_cast<double>(solved) / static_cast<double>(n);
}

nlohmann::json campaign_stats(const std::vector<TrialRecord>& records, const std::vector<Mode>& modes) {
    using nlohmann::json;
    struct Sample {
        std::size_t solved = 0;
        std::vector<double> iterations;
    };
    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::pair<std::string, std::string>, std::map<Mode, Sample>> by_variant;
    for (const auto& r : records) {
        auto key = std::make_pair(r.constraint_id, r.combination);
        if (!by_variant.count(key)) order.push_back(key);
        Sample& s = by_variant[key][r.mode];
        s.solved += r.status == SearchStatus::Solved;
        s.iterations.push_back(static_cast<double>(r.iterations));
    }

    json variants = json::array();
    std::map<Mode, std::vector<double>> rates;
    for (const auto& key : order) {
        auto& per_mode = by_variant[key];
        json jm = json::object();
        for (Mode m : modes) {
            if (!per_mode.count(m)) continue;
            const Sample& s = per_mode[m];
            double rate = static_cast<double>(s.solved) / static_cast<double>(s.iterations.size());
            rates[m].push_back(rate);
            jm[std::string(mode_name(m))] = {{"solved", s.solved},
                                             {"runs", s.iterations.size()},
                                             {"success_rate", rate},
                                             {"median_iterations", stats::median(s.iterations)}};
        }
        json cmp = json::array();
        for (std::size_t i = 0; i < modes.size(); ++i)
            for (std::size_t j = i + 1; j < modes.size(); ++j) {
                if (!per_mode.count(modes[i]) || !per_mode.count(modes[j])) continue;
                const Sample& a = per_mode[modes[i]];
                const Sample& b = per_mode[modes[j]];
                auto f = stats::fisher_exact_2x2(a.solved, a.iterations.size() - a.solved, b.solved,
                                                 b.iterations.size() - b.solved);
                json w = nullptr;
                if (a.iterations.size() >= stats::kWilcoxonMinSample && b.iterations.size() >= stats::kWilcoxonMinSample)
                    w = stats::wilcoxon_rank_sum(a.iterations, b.iterations);
                cmp.push_back({{"a", std::string(mode_name(modes[i]))},
                               {"b", std::string(mode_name(modes[j]))},
                               {"fisher_p", f.p_value},
                               {"odds_ratio", f.odds_ratio},
                               {"wilcoxon_p", w},
                               {"a12_iterations", stats::vargha_delaney_a12(a.iterations, b.iterations)}});
            }
        variants.push_back(
            {{"constraint_id", key.first}, {"combination", key.second}, {"modes", jm}, {"comparisons", cmp}});
    }

    json summary = json::object();
    for (Mode m : modes) {
        if (!rates.count(m)) continue;
        const auto& rs = rates[m];
        double mean = 0;
        for (double r : rs) mean += r;
        summary[std::string(mode_name(m))] = {{"variants", rs.size()},
                                              {"median_success_rate", stats::median(rs)},
                                              {"mean_success_rate", mean / static_cast<double>(rs.size())}};
    }
    json jmodes = json::array();
    for (Mode m : modes) jmodes.push_back(std::string(mode_name(m)));
    return {{"modes", jmodes}, {"summary", summary}, {"variants", variants}};
}

}  // namespace mcdc
