#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ksso/ksso.hpp"

namespace {

ksso::Automaton load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ksso::UsageError("cannot read model file \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return ksso::parse_automaton(buf.str());
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ksso::UsageError("cannot write \"" + path + "\"");
    out << text;
}

int print_verdict(const ksso::Verdict& v) {
    std::cout << ksso::verdict_json(v).dump(2) << "\n";
    return v.opaque ? 0 : 1;
}

struct CheckArgs {
    std::string model;
    std::int64_t k = 0;
    bool k_given = false;
    bool inf = false;
    bool zero = false;
};

int run_check(const CheckArgs& a) {
    const int picked = int(a.k_given) + int(a.inf) + int(a.zero);
    if (picked != 1) throw ksso::UsageError("check needs exactly one of --k, --inf, --zero");
    if (a.k_given && a.k < 0) throw ksso::UsageError("--k must be non-negative");
    ksso::Automaton g = load_model(a.model);
    if (a.zero) return print_verdict(ksso::check_zero_sso(g));
    if (a.inf) return print_verdict(ksso::check_inf_sso(g));
    return print_verdict(ksso::check_k_sso(g, static_cast<std::uint64_t>(a.k)));
}

struct OracleArgs {
    std::string model;
    std::int64_t k = 0;
    bool k_given = false;
    bool inf = false;
    std::uint64_t max_obs_len = ksso::OracleConfig::automatic;
    std::uint64_t max_total_len = ksso::OracleConfig::automatic;
    unsigned allowance = 0;
    bool bounded = false;
};

int run_oracle(const OracleArgs& a) {
    if (int(a.k_given) + int(a.inf) != 1)
        throw ksso::UsageError("oracle needs exactly one of --k, --inf");
    if (a.k_given && a.k < 0) throw ksso::UsageError("--k must be non-negative");
    ksso::Automaton g = load_model(a.model);
    if (g.state_count() > 8 && !a.bounded)
        throw ksso::UsageError("oracle enumeration is exponential; pass --bounded to "
                               "acknowledge running it on more than 8 states");
    ksso::OracleConfig cfg;
    cfg.max_obs_len = a.max_obs_len;
    cfg.max_total_len = a.max_total_len;
    cfg.repetition_allowance = a.allowance;
    ksso::Verdict v = a.inf ? ksso::oracle_inf_sso(g, cfg)
                            : ksso::oracle_k_sso(g, static_cast<std::uint64_t>(a.k), cfg);
    if (g.state_count() > 8) v.mode = "bounded";  // exactness claimed only at desk scale
    return print_verdict(v);
}

int run_bound(const std::string& model) {
    ksso::Automaton g = load_model(model);
    ksso::InitialSecretSub ghat = ksso::initial_secret_subautomaton(g);
    std::cout << ksso::upper_bound_kstar(ghat, g) << "\n";
    return 0;
}

int run_observer(const std::string& model, const std::string& out) {
    ksso::Automaton g = load_model(model);
    write_output(ksso::dot_observer(ksso::build_observer(g), g, "observer"), out);
    return 0;
}

std::string render_artifact(const ksso::Artifacts& a, const std::string& what) {
    if (what == "obs") return ksso::dot_observer(a.observer, a.g, "observer");
    if (what == "ghat") return ksso::dot_automaton(a.ghat.automaton, "ghat");
    if (what == "gtilde") return ksso::dot_automaton(a.gtilde.automaton, "gtilde");
    if (what == "gtildeobs")
        return ksso::dot_observer(a.gtilde_obs, a.gtilde.automaton, "gtilde_obs");
    if (what == "cc") return ksso::dot_composition(a.cc, a.ghat, a.gtilde_obs, a.gtilde, "cc");
    throw ksso::UsageError("--what must be one of obs, ghat, gtilde, gtildeobs, cc");
}

int run_export(const std::string& model, const std::string& what, const std::string& out) {
    ksso::Artifacts a = ksso::build_artifacts(load_model(model));
    write_output(render_artifact(a, what), out);
    return 0;
}

std::string default_out_dir() {
    const char* env = std::getenv("KSSO_OUT_DIR");
    return env && *env ? env : ".";
}

int run_compose(const std::string& model, std::string dir) {
    if (dir.empty()) dir = default_out_dir();
    ksso::Artifacts a = ksso::build_artifacts(load_model(model));
    std::filesystem::create_directories(dir);
    for (const char* what : {"obs", "ghat", "gtilde", "gtildeobs", "cc"}) {
        std::filesystem::path path = std::filesystem::path(dir) / (std::string(what) + ".dot");
        write_output(render_artifact(a, what), path.string());
        std::cout << path.string() << "\n";
    }
    return 0;
}

int run_gen(const ksso::GeneratorParams& p) {
    std::cout << ksso::serialize(ksso::random_automaton(p));
    return 0;
}

int run_selftest(std::uint64_t cases, std::uint64_t seed) {
    const std::size_t states[] = {3, 4, 5, 6};
    const std::size_t obs[] = {1, 2};
    const std::size_t unobs[] = {0, 1};
    const double density[] = {0.2, 0.4};
    const double secret[] = {0.2, 0.4};
    std::uint64_t checks = 0;
    for (std::uint64_t i = 0; i < cases; ++i) {
        ksso::GeneratorParams p;
        std::uint64_t c = i;
        p.n_states = states[c % 4]; c /= 4;
        p.n_obs_events = obs[c % 2]; c /= 2;
        p.n_unobs_events = unobs[c % 2]; c /= 2;
        p.transition_density = density[c % 2]; c /= 2;
        p.secret_fraction = secret[c % 2];
        p.seed = seed + i;
        ksso::Automaton g = ksso::random_automaton(p);
        for (std::uint64_t k = 0; k <= 4; ++k) {
            bool structural = ksso::check_k_sso(g, k).opaque;
            bool semantic = ksso::oracle_k_sso(g, k).opaque;
            ++checks;
            if (structural != semantic) {
                std::cout << "selftest: disagreement at seed " << p.seed << ", K=" << k
                          << " (verifier " << structural << ", oracle " << semantic << ")\n"
                          << ksso::serialize(g);
                return 1;
            }
        }
        bool structural = ksso::check_inf_sso(g).opaque;
        bool semantic = ksso::oracle_inf_sso(g).opaque;
        ++checks;
        if (structural != semantic) {
            std::cout << "selftest: disagreement at seed " << p.seed << " (inf)\n"
                      << ksso::serialize(g);
            return 1;
        }
    }
    std::cout << "selftest: " << cases << " automata, " << checks << " checks, all agree\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"strong K-step opacity checker for partially observed automata"};
    app.require_subcommand(1);

    CheckArgs check;
    auto* c_check = app.add_subcommand("check", "decide opacity, print a JSON verdict");
    c_check->add_option("model", check.model, "input .aut model")->required();
    auto* kopt = c_check->add_option("--k", check.k, "check K-step opacity");
    c_check->add_flag("--inf", check.inf, "check infinite-step opacity");
    c_check->add_flag("--zero", check.zero, "check 0-step (current-state) opacity");

    OracleArgs oracle;
    auto* c_oracle = app.add_subcommand("oracle", "brute-force reference check (small inputs)");
    c_oracle->add_option("model", oracle.model, "input .aut model")->required();
    auto* okopt = c_oracle->add_option("--k", oracle.k, "check K-step opacity");
    c_oracle->add_flag("--inf", oracle.inf, "check infinite-step opacity");
    c_oracle->add_option("--max-obs-len", oracle.max_obs_len, "cap on |alpha|");
    c_oracle->add_option("--max-total-len", oracle.max_total_len, "cap on |alpha| + |beta|");
    c_oracle->add_option("--allow", oracle.allowance,
                         "extra per-state repetitions inside unobservable segments");
    c_oracle->add_flag("--bounded", oracle.bounded, "acknowledge running beyond 8 states");

    std::string model, out_path, what = "obs", dir;
    auto* c_bound = app.add_subcommand("bound", "print the K upper bound K*");
    c_bound->add_option("model", model, "input .aut model")->required();

    auto* c_observer = app.add_subcommand("observer", "emit the observer as DOT");
    c_observer->add_option("model", model, "input .aut model")->required();
    c_observer->add_option("-o,--out", out_path, "output file (default stdout)");

    auto* c_export = app.add_subcommand("export", "emit one verification artifact as DOT");
    c_export->add_option("model", model, "input .aut model")->required();
    c_export->add_option("--what", what, "obs|ghat|gtilde|gtildeobs|cc")->required();
    c_export->add_option("-o,--out", out_path, "output file (default stdout)");

    auto* c_compose = app.add_subcommand("compose", "emit all five verification artifacts as DOT");
    c_compose->add_option("model", model, "input .aut model")->required();
    c_compose->add_option("-o,--out-dir", dir, "output directory (default $KSSO_OUT_DIR or .)");

    ksso::GeneratorParams params;
    auto* c_gen = app.add_subcommand("gen", "print a seeded random model");
    c_gen->add_option("--states", params.n_states, "number of states");
    c_gen->add_option("--obs-events", params.n_obs_events, "number of observable events");
    c_gen->add_option("--unobs-events", params.n_unobs_events, "number of unobservable events");
    c_gen->add_option("--density", params.transition_density, "transition density in [0,1]");
    c_gen->add_option("--secret-fraction", params.secret_fraction, "secret fraction in [0,1]");
    c_gen->add_option("--seed", params.seed, "generator seed");

    std::uint64_t cases = 500, seed = 0;
    auto* c_selftest = app.add_subcommand("selftest", "verifier/oracle agreement sweep");
    c_selftest->add_option("--cases", cases, "number of random automata");
    c_selftest->add_option("--seed", seed, "base seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*c_check) {
            check.k_given = kopt->count() > 0;
            return run_check(check);
        }
        if (*c_oracle) {
            oracle.k_given = okopt->count() > 0;
            return run_oracle(oracle);
        }
        if (*c_bound) return run_bound(model);
        if (*c_observer) return run_observer(model, out_path);
        if (*c_export) return run_export(model, what, out_path);
        if (*c_compose) return run_compose(model, dir);
        if (*c_gen) return run_gen(params);
        if (*c_selftest) return run_selftest(cases, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
