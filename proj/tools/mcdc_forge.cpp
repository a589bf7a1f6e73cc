#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "mcdc/bench.hpp"
#include "mcdc/cbr.hpp"
#include "mcdc/error.hpp"
#include "mcdc/model.hpp"
#include "mcdc/ocl.hpp"
#include "mcdc/ranges.hpp"
#include "mcdc/reformulate.hpp"
#include "mcdc/search.hpp"

namespace fs = std::filesystem;
using namespace mcdc;

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitError = 1;
constexpr int kExitExhausted = 2;
constexpr int kExitConflict = 3;

struct Inputs {
    std::string model;
    std::string constraints;
};

void add_inputs(CLI::App* cmd, Inputs& in) {
    cmd->add_option("--model", in.model, "class model JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--constraints", in.constraints, "OCL constraint file")->required()->check(CLI::ExistingFile);
}

std::vector<ocl::OclConstraint> select(const std::vector<ocl::OclConstraint>& all, const std::string& id) {
    if (id.empty()) return all;
    for (const auto& c : all)
        if (c.id == id) return {c};
    throw SemanticError("no constraint with id '" + id + "'");
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    return out;
}

int cmd_parse(const Inputs& in) {
    auto model = load_model(in.model);
    for (const auto& c : ocl::load(in.constraints, model)) {
        auto clauses = ocl::extract_clauses(c);
        std::cout << c.id << ": context " << c.context
                  << (c.kind == ocl::ConstraintKind::Precondition ? "::" + c.operation + " pre" : " inv") << ", "
                  << clauses.size() << " clause(s)\n";
        for (const auto& cl : clauses) std::cout << "  [" << cl.index << "] " << ocl::render(cl.expr) << '\n';
    }
    return 0;
}

int cmd_reformulate(const Inputs& in, const std::string& id, const std::string& out_path) {
    auto model = load_model(in.model);
    nlohmann::json out = nlohmann::json::array();
    for (const auto& c : select(ocl::load(in.constraints, model), id))
        for (const auto& v : reformulate(c))
            out.push_back({{"origin", v.origin},
                           {"combination", combination_label(v.combination)},
                           {"ocl", ocl::render(c, v.expr)},
                           {"groups", v.dependent_groups}});
    if (out_path.empty()) {
        std::cout << out.dump(2) << '\n';
    } else {
        open_out(out_path) << out.dump(2) << '\n';
    }
    return 0;
}

struct SolveArgs {
    std::string id;
    std::string combination;
    std::string mode = "avmo";
    std::size_t budget = 2000;
    std::uint64_t seed = 0;
    unsigned scaling = 1;
    std::string trace;
    std::string dump_ranges;
    std::string repo;
    std::string out;
};

int cmd_solve(const Inputs& in, const SolveArgs& a) {
    auto model = load_model(in.model);
    auto constraints = select(ocl::load(in.constraints, model), a.id);
    if (a.id.empty() && constraints.size() != 1 && !a.combination.empty())
        throw SemanticError("--combination needs --id");
    Mode mode = parse_mode(a.mode);
    Repository repo;
    if (!a.repo.empty() && fs::exists(a.repo)) repo = Repository::load(a.repo, model);

    std::optional<std::ofstream> trace;
    if (!a.trace.empty()) {
        trace = open_out(a.trace);
        *trace << "constraint_id,combination,iteration,fitness\n";
    }
    nlohmann::json ranges_json = nlohmann::json::object();
    nlohmann::json solutions = nlohmann::json::array();
    bool any_conflict = false, any_unsolved = false;

    for (const auto& c : constraints) {
        std::vector<McdcVariant> variants;
        if (a.combination.empty())
            variants = reformulate(c);
        else
            variants.push_back(make_variant(c, parse_combination(a.combination)));
        for (const auto& v : variants) {
            std::string label = combination_label(v.combination);
            SearchSpace space(model, v);
            SolveSettings s;
            s.mode = mode;
            s.budget = a.budget;
            s.scaling = a.scaling;
            s.seed = trial_seed(a.seed, c.id, label, mode, 0);
            s.record_trace = trace.has_value();
            RangeMap ranges;
            SearchResult r = solve_variant(space, v, s, &repo, &ranges);
            if (mode == Mode::Avmr || mode == Mode::Avmrc) ranges_json[c.id + " " + label] = ranges.to_json();
            std::cout << c.id << ' ' << label << ' ' << status_name(r.status) << " iterations=" << r.iterations
                      << " best_fitness=" << r.best_fitness << '\n';
            if (trace)
                for (std::size_t i = 0; i < r.trace.size(); ++i)
                    *trace << c.id << ',' << label << ',' << i + 1 << ',' << r.trace[i] << '\n';
            if (r.status == SearchStatus::Solved) {
                if (mode == Mode::Avmc || mode == Mode::Avmrc || !a.repo.empty()) repo.store(v, r.cfg);
            }
            any_conflict = any_conflict || r.status == SearchStatus::ConflictSuspected;
            any_unsolved = any_unsolved || r.status != SearchStatus::Solved;
            solutions.push_back({{"constraint_id", c.id},
                                 {"combination", label},
                                 {"status", std::string(status_name(r.status))},
                                 {"iterations", r.iterations},
                                 {"configuration", configuration_to_json(r.cfg)}});
        }
    }
    if (!a.dump_ranges.empty()) open_out(a.dump_ranges) << ranges_json.dump(2) << '\n';
    if (!a.out.empty()) open_out(a.out) << solutions.dump(2) << '\n';
    if (!a.repo.empty()) repo.save(a.repo);
    if (any_conflict) return kExitConflict;
    return any_unsolved ? kExitExhausted : kExitSolved;
}

struct BenchArgs {
    std::string modes = "avmo,avmc,avmr,avmrc,rs";
    std::size_t reps = 30;
    std::size_t budget = 2000;
    std::uint64_t base_seed = 42;
    unsigned scaling = 1;
    unsigned threads = 0;
    std::string out = "results.csv";
    std::string stats;
};

int cmd_bench(const Inputs& in, const BenchArgs& a) {
    auto model = load_model(in.model);
    auto constraints = ocl::load(in.constraints, model);
    CampaignOptions opt;
    opt.modes = parse_modes(a.modes);
    opt.reps = a.reps;
    opt.budget = a.budget;
    opt.base_seed = a.base_seed;
    opt.scaling = a.scaling;
    opt.threads = a.threads;
    Campaign camp = run_campaign(model, constraints, opt);
    for (const auto& f : camp.failures) std::cerr << "warning: " << f.constraint_id << " skipped: " << f.message << '\n';
    {
        auto out = open_out(a.out);
        write_csv(out, camp.records);
    }
    auto stats = campaign_stats(camp.records, opt.modes);
    if (!a.stats.empty()) open_out(a.stats) << stats.dump(2) << '\n';
    for (const auto& [mode, s] : stats.at("summary").items())
        std::cout << mode << ": median success rate " << s.at("median_success_rate").get<double>() << " over "
                  << s.at("variants").get<std::size_t>() << " variants\n";
    std::cout << camp.records.size() << " trials written to " << a.out << '\n';
    return camp.failures.empty() ? 0 : kExitError;
}

int cmd_instantiate(const std::string& model_path, const std::string& context, const std::string& out_path) {
    auto model = load_model(model_path);
    if (!model.find_class(context)) throw SemanticError("unknown context class '" + context + "'");
    auto cfg = instantiate_default(model, context);
    auto text = configuration_to_json(cfg).dump(2);
    if (out_path.empty()) {
        std::cout << text << '\n';
    } else {
        open_out(out_path) << text << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MC/DC test data generation for OCL constraints"};
    app.require_subcommand(1);

    Inputs parse_in;
    auto* parse = app.add_subcommand("parse", "parse constraints and list their clauses");
    add_inputs(parse, parse_in);

    Inputs ref_in;
    std::string ref_id, ref_out;
    auto* ref = app.add_subcommand("reformulate", "print the MC/DC variants as JSON");
    add_inputs(ref, ref_in);
    ref->add_option("--id", ref_id, "only this constraint");
    ref->add_option("--out", ref_out, "write JSON here instead of stdout");

    Inputs solve_in;
    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "generate test data for MC/DC variants");
    add_inputs(solve, solve_in);
    solve->add_option("--id", sa.id, "constraint id (default: all)");
    solve->add_option("--combination", sa.combination, "one combination such as TTF (default: all selected)");
    solve->add_option("--mode", sa.mode, "avmo, avmc, avmr, avmrc or rs")->capture_default_str();
    solve->add_option("--budget", sa.budget, "fitness evaluations per variant")->capture_default_str()->check(CLI::PositiveNumber);
    solve->add_option("--seed", sa.seed, "random seed")->capture_default_str();
    solve->add_option("--sf", sa.scaling, "range scaling factor")->capture_default_str()->check(CLI::PositiveNumber);
    solve->add_option("--trace", sa.trace, "CSV of fitness per evaluation");
    solve->add_option("--dump-ranges", sa.dump_ranges, "JSON of reduced ranges (avmr, avmrc)");
    solve->add_option("--repo", sa.repo, "solution repository JSON, read and updated");
    solve->add_option("--out", sa.out, "JSON of the resulting configurations");

    Inputs bench_in;
    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "run the comparison campaign");
    add_inputs(bench, bench_in);
    bench->add_option("--modes", ba.modes, "comma-separated modes")->capture_default_str();
    bench->add_option("--reps", ba.reps, "repetitions per variant and mode")->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--budget", ba.budget, "fitness evaluations per trial")->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--base-seed", ba.base_seed, "campaign seed")->capture_default_str();
    bench->add_option("--sf", ba.scaling, "range scaling factor")->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--threads", ba.threads, "worker threads (0: all cores)")->capture_default_str();
    bench->add_option("--out", ba.out, "trial CSV")->capture_default_str();
    bench->add_option("--stats", ba.stats, "statistics JSON");

    std::string inst_model, inst_context, inst_out;
    auto* inst = app.add_subcommand("instantiate", "print the default configuration of a context class");
    inst->add_option("--model", inst_model, "class model JSON")->required()->check(CLI::ExistingFile);
    inst->add_option("--context", inst_context, "context class")->required();
    inst->add_option("--out", inst_out, "write JSON here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*parse) return cmd_parse(parse_in);
        if (*ref) return cmd_reformulate(ref_in, ref_id, ref_out);
        if (*solve) return cmd_solve(solve_in, sa);
        if (*bench) return cmd_bench(bench_in, ba);
        if (*inst) return cmd_instantiate(inst_model, inst_context, inst_out);
    } catch (const mcdc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
