#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pforge/json_io.hpp"
#include "pforge/patterns.hpp"
#include "pforge/verify.hpp"

using namespace pforge;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitInput = 65;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

unsigned threads_from_env() {
    if (const char *env = std::getenv("PATTERN_FORGE_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1)
                return static_cast<unsigned>(v);
        }
        catch (const std::exception &) {
        }
        throw UsageError("PATTERN_FORGE_THREADS must be a positive integer");
    }
    return 1;
}

// Inline JSON, or @path to read it from a file.
json read_json_arg(const std::string &arg) {
    std::string text = arg;
    if (!arg.empty() && arg.front() == '@') {
        std::ifstream in(arg.substr(1));
        if (!in)
            throw StructuralError("cannot read " + arg.substr(1));
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    }
    catch (const json::parse_error &e) {
        throw StructuralError(std::string("malformed JSON: ") + e.what());
    }
}

struct Output {
    std::string command;
    json config;
    std::string out_path;
    std::vector<std::string> inputs;

    void emit(const json &result, std::uint64_t nodes) const {
        std::cout << result.dump() << '\n';
        if (out_path.empty())
            return;
        json manifest{{"command", command},
                      {"config", config},
                      {"version", PFORGE_VERSION},
                      {"inputs", inputs},
                      {"output", out_path},
                      {"nodes", nodes}};
        std::ofstream out(out_path);
        if (!out)
            throw StructuralError("cannot write " + out_path);
        out << json{{"manifest", manifest}, {"result", result}}.dump(2) << '\n';
    }
};

int exit_for(CertStatus s) {
    switch (s) {
    case CertStatus::Verified:
        return 0;
    case CertStatus::CounterexampleFound:
        return 1;
    case CertStatus::Inconclusive:
        return 2;
    }
    return 2;
}

int exit_for(SearchStatus s) {
    switch (s) {
    case SearchStatus::Found:
        return 0;
    case SearchStatus::Exhausted:
        return 1;
    case SearchStatus::Inconclusive:
        return 2;
    }
    return 2;
}

struct SearchArgs {
    int n = 0;
    std::int64_t m = -1;
    int l_min = 1;
    int l_max = 0;
    std::int64_t entry_bound = 0;
    unsigned threads = 0;
    bool nondeterministic = false;
    std::uint64_t node_cap = UINT64_MAX;
    bool no_symmetry = false;
    std::string out;
};

int run_search(const SearchArgs &a, CLI::App *cmd) {
    if (a.m == 0 && cmd->count("--entry-bound") == 0)
        throw UsageError("--entry-bound is required when --m 0");
    if (a.m != 0 && cmd->count("--entry-bound") != 0)
        throw UsageError("--entry-bound only applies when --m 0");
    SearchConfig cfg;
    cfg.n = a.n;
    cfg.m = a.m;
    cfg.l_min = a.l_min;
    cfg.l_max = a.l_max;
    cfg.entry_bound = a.entry_bound;
    cfg.threads = a.threads ? a.threads : threads_from_env();
    cfg.deterministic = !a.nondeterministic;
    cfg.node_cap = a.node_cap;
    cfg.symmetry_pruning = !a.no_symmetry;
    try {
        validate(cfg);
    }
    catch (const std::exception &e) {
        throw UsageError(e.what());
    }
    const SearchOutcome o = search(cfg);
    Output out{"search",
               {{"n", cfg.n},
                {"m", cfg.m},
                {"l_min", cfg.l_min},
                {"l_max", cfg.l_max},
                {"entry_bound", cfg.entry_bound},
                {"deterministic", cfg.deterministic},
                {"node_cap", cfg.node_cap},
                {"symmetry_pruning", cfg.symmetry_pruning}},
               a.out,
               {}};
    out.emit(to_json(o), o.nodes);
    return exit_for(o.status);
}

struct VerifyArgs {
    std::string claim;
    std::size_t kappa = 0, max_set = 0, n = 0, dim = 0;
    std::int64_t bound = -1, a = 0;
    std::string group, set, colouring;
    std::vector<std::size_t> alphas, gammas;
    std::size_t beta = 0;
    bool all_subgroups = false;
    std::uint64_t max_nodes = UINT64_MAX;
    unsigned threads = 0;
    std::string out;
};

void need(CLI::App *cmd, std::initializer_list<const char *> flags, const std::string &claim) {
    for (const char *f : flags)
        if (cmd->count(f) == 0)
            throw UsageError("claim " + claim + " needs " + f);
}

int run_verify(const VerifyArgs &a, CLI::App *cmd) {
    Budget budget{a.max_nodes, a.threads ? a.threads : threads_from_env()};
    json config{{"claim", a.claim}, {"max_nodes", a.max_nodes}};
    std::vector<std::string> inputs;
    auto group = [&] {
        need(cmd, {"--group"}, a.claim);
        if (a.group.starts_with("@"))
            inputs.push_back(a.group.substr(1));
        const json j = read_json_arg(a.group);
        config["group"] = j;
        return group_spec_from_json(j);
    };

    Certificate cert;
    const std::string &c = a.claim;
    if (c == "thm4.1") {
        need(cmd, {"--kappa", "--max-set"}, c);
        const std::size_t n = cmd->count("--n") ? a.n : 2;
        config.update({{"kappa", a.kappa}, {"max_set", a.max_set}, {"n", n}});
        cert = find_monochromatic_fs_delta(a.kappa, a.max_set, n, budget);
    }
    else if (c == "thm3.2") {
        need(cmd, {"--dim", "--bound", "--n"}, c);
        config.update({{"dim", a.dim}, {"bound", a.bound}, {"n", a.n}});
        cert = find_monochromatic_fs("sum_squares", GroupSpec::integer_box(a.bound, a.dim), a.n, budget);
    }
    else if (c == "lemma3.1") {
        need(cmd, {"--dim", "--bound"}, c);
        config.update({{"dim", a.dim}, {"bound", a.bound}});
        cert = no_seven_norms(a.dim, a.bound, budget);
    }
    else if (c == "thm5.4") {
        const std::string id = a.colouring.empty() ? "product_sigma" : a.colouring;
        const GroupSpec G = group();
        config["colouring"] = id;
        cert = find_monochromatic_ap(id, G, budget);
    }
    else if (c == "thm5.5") {
        const std::string id = a.colouring.empty() ? "subgroup_parity" : a.colouring;
        const GroupSpec G = group();
        config.update({{"colouring", id}, {"all_subgroups", a.all_subgroups}});
        cert = find_monochromatic_subgroup(id, G, a.all_subgroups, budget);
    }
    else if (c == "thm5.6") {
        need(cmd, {"--a", "--dim", "--bound"}, c);
        config.update({{"a", a.a}, {"dim", a.dim}, {"bound", a.bound}});
        cert = find_monochromatic_span(a.a, a.dim, a.bound, budget);
    }
    else if (c == "thm2.3") {
        need(cmd, {"--alphas", "--beta", "--gammas", "--colouring"}, c);
        const GroupSpec G = group();
        std::vector<Element> g;
        for (std::size_t i = 0; i < G.rank(); ++i)
            g.push_back(G.basis(i));
        config.update({{"alphas", a.alphas}, {"beta", a.beta}, {"gammas", a.gammas}, {"colouring", a.colouring}});
        cert = check_fs_matrix_identities(g, a.alphas, a.beta, a.gammas, colouring_by_id(a.colouring));
    }
    else if (c == "thm5.1-shadow") {
        need(cmd, {"--set"}, c);
        const GroupSpec G = group();
        const json set = read_json_arg(a.set);
        if (!set.is_array())
            throw StructuralError("--set must be a JSON array of elements");
        std::vector<Element> xs;
        for (const auto &e : set)
            xs.push_back(element_from_json(G, e));
        config["set"] = set;
        cert = fs_support_growth_check(G, xs);
    }
    else {
        throw UsageError("unknown claim id '" + c + "'");
    }
    cert.claim = c;
    Output{"verify", config, a.out, inputs}.emit(cert.to_json(), cert.enumerated);
    return exit_for(cert.status);
}

GroupSpec infer_group(const json &element) {
    if (!element.is_array() || element.empty())
        throw StructuralError("--element must be a nonempty JSON array");
    std::int64_t bound = 1;
    std::int64_t den = 1;
    bool rational = false;
    for (const auto &c : element) {
        if (c.is_number_integer()) {
            bound = std::max<std::int64_t>(bound, std::llabs(c.get<std::int64_t>()));
        }
        else if (c.is_array() && c.size() == 2 && c[0].is_number_integer() && c[1].is_number_integer() &&
                 c[1].get<std::int64_t>() > 0) {
            rational = true;
            const auto num = c[0].get<std::int64_t>();
            const auto d = c[1].get<std::int64_t>();
            den = std::lcm(den, d);
            bound = std::max<std::int64_t>(bound, (std::llabs(num) + d - 1) / d);
        }
        else {
            throw StructuralError("element coordinate must be an integer or [num, den]: " + c.dump());
        }
    }
    if (!rational)
        return GroupSpec::integer_box(bound, element.size());
    return GroupSpec(std::vector<FactorSpec>(element.size(), RationalBox{den, bound}));
}

struct ColourArgs {
    std::string id, element, group, branches;
};

int run_colour(const ColourArgs &a) {
    ColourToken token;
    if (a.id == "delta") {
        if (a.branches.empty())
            throw UsageError("colour --id delta needs --branches");
        token = delta_colouring(branch_set_from_json(read_json_arg(a.branches)));
    }
    else {
        if (a.element.empty())
            throw UsageError("colour needs --element");
        const ElementColouring colour = colouring_by_id(a.id);
        const json e = read_json_arg(a.element);
        const GroupSpec G = a.group.empty() ? infer_group(e) : group_spec_from_json(read_json_arg(a.group));
        token = colour(element_from_json(G, e));
    }
    std::cout << token.canonical() << '\n';
    return 0;
}

int run_bench(const std::string &workload, unsigned threads) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    std::uint64_t nodes = 0;
    std::string status;
    auto search_nm = [&](int n, std::int64_t m, int l_max) {
        SearchConfig cfg;
        cfg.n = n;
        cfg.m = m;
        cfg.l_max = l_max;
        cfg.threads = threads;
        const auto o = search(cfg);
        nodes = o.nodes;
        status = to_string(o.status);
    };
    auto cert = [&](const Certificate &c) {
        nodes = c.enumerated;
        status = to_string(c.status);
    };
    const Budget budget{UINT64_MAX, threads};
    if (workload == "search-n3-m2")
        search_nm(3, 2, 8);
    else if (workload == "search-n4-m2")
        search_nm(4, 2, 16);
    else if (workload == "search-n3-m3")
        search_nm(3, 3, 9);
    else if (workload == "thm4.1-k3")
        cert(find_monochromatic_fs_delta(3, 3, 2, budget));
    else if (workload == "lemma3.1-d3b3")
        cert(no_seven_norms(3, 3, budget));
    else if (workload == "thm3.2-b2")
        cert(find_monochromatic_fs("sum_squares", GroupSpec::integer_box(2, 2), 3, budget));
    else
        throw UsageError("unknown workload '" + workload + "'");
    const double ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
    json report{{"workload", workload},
                {"status", status},
                {"nodes", nodes},
                {"threads", threads},
                {"wall_ms", ms},
                {"nodes_per_sec", ms > 0 ? static_cast<double>(nodes) * 1000.0 / ms : 0.0}};
    std::cout << report.dump() << '\n';
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Search for adequate patterns and certify colourings at desk scale", "pattern_forge"};
    app.set_version_flag("--version", PFORGE_VERSION);
    app.require_subcommand(1);

    SearchArgs sa;
    auto *search_cmd = app.add_subcommand("search", "Search for an n-adequate pattern");
    search_cmd->add_option("--n", sa.n, "Number of rows")->required()->check(CLI::Range(1, 20));
    search_cmd->add_option("--m", sa.m, "Modulus, 0 for bounded integer entries")->required();
    search_cmd->add_option("--l-max", sa.l_max, "Largest pattern length")->required()->check(CLI::PositiveNumber);
    search_cmd->add_option("--l-min", sa.l_min, "Smallest pattern length")->check(CLI::PositiveNumber);
    search_cmd->add_option("--entry-bound", sa.entry_bound, "Entry bound B when m = 0")->check(CLI::PositiveNumber);
    search_cmd->add_option("--threads", sa.threads, "Worker threads")->check(CLI::PositiveNumber);
    search_cmd->add_flag("--nondeterministic", sa.nondeterministic, "Return the first hit from any worker");
    search_cmd->add_option("--node-cap", sa.node_cap, "Node budget");
    search_cmd->add_flag("--no-symmetry", sa.no_symmetry, "Disable symmetry pruning");
    search_cmd->add_option("--out", sa.out, "Also write JSON with a run manifest here");

    VerifyArgs va;
    auto *verify_cmd = app.add_subcommand("verify", "Run a bounded certificate");
    verify_cmd->add_option("--claim", va.claim, "Claim id")->required();
    verify_cmd->add_option("--kappa", va.kappa)->check(CLI::Range(1, 16));
    verify_cmd->add_option("--max-set", va.max_set)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--n", va.n)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--dim", va.dim)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--bound", va.bound)->check(CLI::NonNegativeNumber);
    verify_cmd->add_option("--a", va.a);
    verify_cmd->add_option("--group", va.group, "Group spec JSON or @file");
    verify_cmd->add_option("--set", va.set, "Element list JSON or @file");
    verify_cmd->add_option("--colouring", va.colouring, "Colouring id");
    verify_cmd->add_option("--alphas", va.alphas)->delimiter(',');
    verify_cmd->add_option("--beta", va.beta);
    verify_cmd->add_option("--gammas", va.gammas)->delimiter(',');
    verify_cmd->add_flag("--all-subgroups", va.all_subgroups);
    verify_cmd->add_option("--max-nodes", va.max_nodes, "Node budget");
    verify_cmd->add_option("--threads", va.threads, "Worker threads")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--out", va.out, "Also write JSON with a run manifest here");

    ColourArgs ca;
    auto *colour_cmd = app.add_subcommand("colour", "Evaluate a colouring");
    colour_cmd->add_option("--id", ca.id, "Colouring id")->required();
    colour_cmd->add_option("--element", ca.element, "Element JSON");
    colour_cmd->add_option("--group", ca.group, "Group spec JSON, inferred as an integer box when absent");
    colour_cmd->add_option("--branches", ca.branches, "Branch set JSON for the delta colouring");

    std::string workload;
    unsigned bench_threads = 0;
    auto *bench_cmd = app.add_subcommand("bench", "Time a named workload");
    bench_cmd->add_option("--workload", workload)->required();
    bench_cmd->add_option("--threads", bench_threads)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::Success &e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*search_cmd)
            return run_search(sa, search_cmd);
        if (*verify_cmd)
            return run_verify(va, verify_cmd);
        if (*colour_cmd)
            return run_colour(ca);
        if (*bench_cmd)
            return run_bench(workload, bench_threads ? bench_threads : threads_from_env());
    }
    catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitUsage;
}
