#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksso/ksso.hpp"

namespace testutil {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline ksso::Automaton load_model(const std::string& name) {
    return ksso::parse_automaton(read_file(std::string(KSSO_MODELS_DIR) + "/" + name));
}

inline ksso::Automaton running_example() { return load_model("running_example.aut"); }
inline ksso::Automaton fixture_d() { return load_model("fixture_d.aut"); }

// two states, one observable step straight into the secret: not 0-step opaque
inline ksso::Automaton fixture_c() {
    return ksso::parse_automaton(
        "states: 0 1\ninitial: 0\nsecret: 1\nobservable: a\ntrans: 0 a 1\n");
}

inline ksso::Automaton clone_without_secrets(const ksso::Automaton& g) {
    ksso::Automaton out(g.state_names(), g.alphabet());
    for (std::size_t x = 0; x < g.state_count(); ++x)
        for (std::size_t e = 0; e < g.alphabet().size(); ++e)
            g.delta(x, e).for_each([&](std::size_t y) { out.add_transition(x, e, y); });
    g.initials().for_each([&](std::size_t x) { out.set_initial(x); });
    return out;
}

// the instance family used by the agreement, monotonicity and plateau suites
inline ksso::GeneratorParams grid_params(std::uint64_t i, std::uint64_t seed_base) {
    static const std::size_t states[] = {3, 4, 5, 6};
    static const std::size_t obs[] = {1, 2};
    static const std::size_t unobs[] = {0, 1};
    static const double density[] = {0.2, 0.4};
    static const double secret[] = {0.2, 0.4};
    ksso::GeneratorParams p;
    std::uint64_t c = i;
    p.n_states = states[c % 4]; c /= 4;
    p.n_obs_events = obs[c % 2]; c /= 2;
    p.n_unobs_events = unobs[c % 2]; c /= 2;
    p.transition_density = density[c % 2]; c /= 2;
    p.secret_fraction = secret[c % 2];
    p.seed = seed_base + i;
    return p;
}

// Replays a witness against the model using machinery independent of the
// engine that produced it. Returns "" when the witness holds up, otherwise
// the first problem found. Only for desk-scale models (the cover check
// enumerates runs).
inline std::string witness_flaw(const ksso::Automaton& g, const ksso::Verdict& v) {
    if (v.opaque) return v.witness ? "opaque verdict carries a witness" : "";
    if (!v.witness) return "violation verdict lacks a witness";
    const ksso::Witness& w = *v.witness;

    for (const std::string& e : w.alpha)
        if (!g.alphabet().observable(g.alphabet().index_checked(e)))
            return "alpha contains unobservable event " + e;
    ksso::StateSet belief = ksso::oracle_belief(g, w.alpha);
    auto xs = g.state_index(w.secret_state);
    if (!xs) return "unknown secret state " + w.secret_state;
    if (!g.is_secret(*xs)) return w.secret_state + " is not secret";
    if (!belief.test(*xs)) return "alpha does not reach a belief containing " + w.secret_state;

    std::vector<std::string> lefts_observable;
    if (!w.path.empty()) {
        ksso::StateSet cur(g.state_count());
        cur.set(*xs);
        std::size_t depth = 0;
        for (const ksso::WitnessStep& s : w.path) {
            std::size_t e = g.alphabet().index_checked(s.event_left);
            const bool obs = g.alphabet().observable(e);
            if (obs && s.event_right != s.event_left) return "observable step not mirrored";
            if (!obs && s.event_right != "eps") return "unobservable step not eps";
            if (obs) {
                ++depth;
                lefts_observable.push_back(s.event_left);
            }
            ksso::StateSet nxt(g.state_count());
            cur.for_each([&](std::size_t x) { nxt |= g.delta(x, e); });
            if (nxt.none()) return "left symbols do not form a run from " + w.secret_state;
            cur = nxt;
        }
        if (depth != w.observable_depth) return "observable_depth mismatch";
        if (lefts_observable != w.beta) return "beta does not match the path's observable lefts";
    } else {
        if (w.beta.size() != w.observable_depth) return "observable_depth mismatch";
        // no path: realizability of beta from the secret state, observer-style
        ksso::StateSet cur(g.state_count());
        cur.set(*xs);
        cur = ksso::unobservable_closure(g, cur);
        for (const std::string& name : w.beta) {
            cur = ksso::detail::observer_successor(g, cur, g.alphabet().index_checked(name));
            if (cur.none()) return "beta not realizable from " + w.secret_state;
        }
    }

    if (ksso::oracle_has_nonsecret_cover(g, w.alpha, w.beta))
        return "a non-secret cover exists for the claimed violation";
    return "";
}

} // namespace testutil
