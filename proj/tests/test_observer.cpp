#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "ksso/observer.hpp"
#include "ksso/oracle.hpp"

using namespace ksso;

namespace {

StateSet named(const Automaton& g, std::initializer_list<const char*> names) {
    StateSet s(g.state_count());
    for (const char* n : names) s.set(g.state_index_checked(n));
    return s;
}

} // namespace

TEST_CASE("unobservable closure follows unobservable chains") {
    Automaton d = testutil::fixture_d();
    CHECK(unobservable_closure(d, named(d, {"0"})) == named(d, {"0", "1"}));
    CHECK(unobservable_closure(d, named(d, {"1"})) == named(d, {"1"}));

    Automaton f = testutil::running_example();
    CHECK(unobservable_closure(f, named(f, {"1"})) == named(f, {"1", "2", "3", "4"}));
    CHECK(unobservable_closure(f, named(f, {"7"})) == named(f, {"7"}));
}

TEST_CASE("observer of the running example") {
    Automaton f = testutil::running_example();
    ObserverAutomaton obs = build_observer(f);

    REQUIRE(obs.belief_count() == 6);
    CHECK(obs.beliefs[0] == named(f, {"0"}));
    CHECK(obs.beliefs[1] == named(f, {"1", "2", "3", "4", "7"}));
    CHECK(obs.beliefs[2] == named(f, {"3", "4", "6"}));
    CHECK(obs.beliefs[3] == named(f, {"5", "6"}));
    CHECK(obs.beliefs[4] == named(f, {"5", "8"}));
    CHECK(obs.beliefs[5] == named(f, {"8"}));
    REQUIRE(obs.roots == std::vector<std::size_t>{0});

    auto succ = [&](std::size_t b, const char* e) {
        const auto& evs = obs.obs_events;
        std::size_t idx = f.alphabet().index_checked(e);
        for (std::size_t k = 0; k < evs.size(); ++k)
            if (evs[k] == idx) return obs.successor(b, k);
        return ObserverAutomaton::nil;
    };
    CHECK(succ(0, "a") == 1);
    CHECK(succ(0, "b") == ObserverAutomaton::nil);
    CHECK(succ(1, "b") == 2);
    CHECK(succ(1, "c") == 3);
    CHECK(succ(1, "a") == ObserverAutomaton::nil);
    CHECK(succ(2, "c") == 4);
    CHECK(succ(3, "c") == 5);
    CHECK(succ(4, "a") == ObserverAutomaton::nil);
    CHECK(succ(5, "c") == ObserverAutomaton::nil);
}

TEST_CASE("observer of the minimal violation fixture") {
    Automaton d = testutil::fixture_d();
    ObserverAutomaton obs = build_observer(d);
    REQUIRE(obs.belief_count() == 2);
    CHECK(obs.beliefs[0] == named(d, {"0", "1"}));
    CHECK(obs.beliefs[1] == named(d, {"3"}));
}

TEST_CASE("belief classification partitions the observer") {
    Automaton f = testutil::running_example();
    ObserverAutomaton obs = build_observer(f);
    BeliefPartition part = classify_beliefs(obs, f.secrets());
    CHECK(part.secret.empty());
    CHECK(part.hybrid == std::vector<std::size_t>{1, 3, 4});
    CHECK(part.nonsecret == std::vector<std::size_t>{0, 2, 5});
    for (std::size_t b = 0; b < obs.belief_count(); ++b) {
        bool in_s = obs.beliefs[b].is_subset_of(f.secrets());
        bool in_ns = !obs.beliefs[b].intersects(f.secrets());
        BeliefClass expect = in_s   ? BeliefClass::secret
                             : in_ns ? BeliefClass::nonsecret
                                     : BeliefClass::hybrid;
        CHECK(part.klass[b] == expect);
    }
}

TEST_CASE("observer properties over random instances") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        Automaton g = random_automaton(testutil::grid_params(seed, 300));
        ObserverAutomaton obs = build_observer(g);
        const std::size_t n = g.state_count();
        CHECK(obs.belief_count() <= (std::size_t{1} << n) - 1);
        for (const StateSet& b : obs.beliefs) CHECK(b.any());
        REQUIRE(obs.roots.size() == 1);
        CHECK(obs.beliefs[obs.roots[0]] == unobservable_closure(g, g.initials()));

        BeliefPartition part = classify_beliefs(obs, g.secrets());
        CHECK(part.secret.size() + part.nonsecret.size() + part.hybrid.size() ==
              obs.belief_count());
    }
}

TEST_CASE("multi-root observer keeps the given roots verbatim") {
    Automaton d = testutil::fixture_d();

    // {0} is not closure-closed (0 -u-> 1) and must stay {0}
    ObserverAutomaton obs = build_multi_root_observer(d, {named(d, {"0"})});
    REQUIRE(obs.roots.size() == 1);
    CHECK(obs.beliefs[obs.roots[0]] == named(d, {"0"}));

    // equal roots merge
    ObserverAutomaton merged = build_multi_root_observer(d, {named(d, {"0"}), named(d, {"0"})});
    CHECK(merged.roots.size() == 1);

    // successors still close over unobservable tails
    ObserverAutomaton full = build_multi_root_observer(d, {named(d, {"0", "1"})});
    auto bidx = full.find_belief(named(d, {"3"}));
    REQUIRE(bidx.has_value());

    CHECK_THROWS_AS(build_multi_root_observer(d, {StateSet(4)}), UsageError);
    CHECK(build_multi_root_observer(d, {}).belief_count() == 0);
}

TEST_CASE("shortest observations reach each belief") {
    Automaton f = testutil::running_example();
    ObserverAutomaton obs = build_observer(f);
    auto words = shortest_observations(obs);
    auto names = [&](std::size_t b) {
        std::vector<std::string> out;
        for (std::size_t e : words[b]) out.push_back(f.alphabet().name(e));
        return out;
    };
    CHECK(names(0) == std::vector<std::string>{});
    CHECK(names(1) == std::vector<std::string>{"a"});
    CHECK(names(2) == std::vector<std::string>{"a", "b"});
    CHECK(names(3) == std::vector<std::string>{"a", "c"});
    CHECK(names(4) == std::vector<std::string>{"a", "b", "c"});
    CHECK(names(5) == std::vector<std::string>{"a", "c", "c"});
}

TEST_CASE("observer beliefs match brute-force observation semantics") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Automaton g = random_automaton(testutil::grid_params(seed, 400));
        ObserverAutomaton obs = build_observer(g);
        auto words = shortest_observations(obs);
        for (std::size_t b = 0; b < obs.belief_count(); ++b) {
            std::vector<std::string> alpha;
            for (std::size_t e : words[b]) alpha.push_back(g.alphabet().name(e));
            CHECK(oracle_belief(g, alpha) == obs.beliefs[b]);
        }
    }
}
