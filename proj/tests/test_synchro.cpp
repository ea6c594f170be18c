#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <vector>

#include "ksync/oracles.hpp"
#include "ksync/predicates.hpp"
#include "ksync/sequences.hpp"
#include "ksync/synchro.hpp"

using namespace ksync;

namespace {

bool holds(const Relation& p, std::initializer_list<uint64_t> values) {
    std::vector<uint64_t> v(values);
    return rel_accepts(p, v);
}

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("run automaton describes maximal novel runs of thue_morse") {
    Dfao tm = thue_morse_dfao();
    Relation runs = build_block_automaton(pred_novel(tm));
    REQUIRE(runs.vars == std::vector<std::string>{"n", "s", "e", "l"});

    // Row 1 has positions {0, 1}: one run from 0, nothing at or past 2.
    CHECK(holds(runs, {1, 0, 1, 2}));
    CHECK(holds(runs, {1, 2, 2, 0}));
    CHECK(!holds(runs, {1, 0, 1, 1}));
    CHECK(!holds(runs, {1, 0, 0, 1})); // run must be maximal: 1 is also novel
    CHECK(!holds(runs, {1, 1, 1, 2}));
    CHECK(holds(runs, {1, 1, 1, 1})); // scanning from 1 finds the tail of the run

    // Row 2 has positions {0, 1, 2, 5}.
    CHECK(holds(runs, {2, 0, 2, 3}));
    CHECK(holds(runs, {2, 3, 5, 1}));
    CHECK(holds(runs, {2, 5, 5, 1}));
    CHECK(holds(runs, {2, 6, 6, 0}));
    CHECK(!holds(runs, {2, 0, 5, 6})); // positions 3, 4 break the run
    CHECK(!holds(runs, {2, 3, 3, 0})); // a run does start at or after 3

    // Row 0 is the single position {0} (the empty factor first occurs there).
    CHECK(holds(runs, {0, 0, 0, 1}));
    CHECK(holds(runs, {0, 1, 1, 0}));
}

TEST_CASE("count of novel positions reaches its fixed point quickly") {
    Dfao tm = thue_morse_dfao();
    SyncBuildInfo info;
    SyncFunction count = build_count_sync(pred_novel(tm), {}, &info);
    CHECK(info.iterations == 6);
    CHECK(info.states == count.graph.state_count());

    PrefixView t = PrefixView::from_generator(thue_morse_at);
    for (uint64_t n = 0; n <= 64; ++n)
        CHECK(eval_sync(count, n) == novel_set_naive(t, n).positions.size());

    uint64_t bad = 0;
    CHECK(check_function_graph(count, 128, &bad));
}

TEST_CASE("factor-count graph of thue_morse") {
    Dfao tm = thue_morse_dfao();
    SyncFunction rho = build_rho_sync(tm);
    CHECK(rho.name == "rho");
    CHECK(rho.graph.state_count() == 15);

    const uint64_t expected[] = {1, 2, 4, 6, 10, 12, 16, 20, 22};
    for (uint64_t n = 0; n <= 8; ++n) CHECK(eval_sync(rho, n) == expected[n]);

    // The graph accepts (6, 16) and nothing else pairs with 6.
    CHECK(accepts(rho.graph, encode_tuple(std::vector<uint64_t>{6, 16}, 2)));
    CHECK(!accepts(rho.graph, encode_tuple(std::vector<uint64_t>{6, 15}, 2)));

    CHECK(eval_sync(rho, 1000000) == eval_by_intersection(rho, 1000000));

    EvalStats stats;
    eval_sync(rho, uint64_t{1} << 40, &stats);
    CHECK(stats.edges_visited > 0);
    CHECK(stats.padding_used <= 2);
}

TEST_CASE("appearance graph of thue_morse") {
    Dfao tm = thue_morse_dfao();
    SyncFunction alpha = build_appearance_sync(tm);
    const uint64_t expected[] = {0, 1, 5, 5, 11, 11, 23, 23, 23};
    for (uint64_t n = 0; n <= 8; ++n) CHECK(eval_sync(alpha, n) == expected[n]);

    PrefixView t = PrefixView::from_generator(thue_morse_at);
    for (uint64_t n = 0; n <= 48; ++n) CHECK(eval_sync(alpha, n) == appearance_naive(t, n));
}

TEST_CASE("power and primitive factor counts of thue_morse") {
    Dfao tm = thue_morse_dfao();
    SyncFunction powers = build_power_count_sync(tm);
    const uint64_t expected[] = {0, 0, 2, 0, 2, 0, 2, 0, 2};
    for (uint64_t n = 0; n <= 8; ++n) CHECK(eval_sync(powers, n) == expected[n]);
    CHECK(accepts(powers.graph, encode_tuple(std::vector<uint64_t>{2, 2}, 2)));

    SyncFunction rho = build_rho_sync(tm);
    SyncFunction prim_a = build_primitive_count_sync(rho, powers);
    SyncFunction prim_b = build_primitive_count_sync(tm);
    CHECK(equivalent(prim_a.graph, prim_b.graph));

    PrefixView t = PrefixView::from_generator(thue_morse_at);
    for (uint64_t n = 0; n <= 64; ++n) {
        CHECK(eval_sync(powers, n) == count_naive(t, n, FactorKind::Powers));
        CHECK(eval_sync(prim_a, n) == count_naive(t, n, FactorKind::Primitive));
        CHECK(eval_sync(rho, n) == eval_sync(powers, n) + eval_sync(prim_a, n));
    }
}

TEST_CASE("run-count automaton outputs the novel-block table") {
    Dfao tm = thue_morse_dfao();
    BlockCountAutomaton bc = build_block_count_dfao(tm, pred_novel(tm));
    CHECK(bc.max_blocks == 5);

    const uint32_t table[] = {1, 1, 2, 1, 3, 1, 5, 3, 3, 1, 5, 5, 5, 3, 3};
    for (uint64_t n = 0; n <= 14; ++n) CHECK(dfao_output(bc.dfao, n) == table[n]);

    PrefixView t = PrefixView::from_generator(thue_morse_at);
    for (uint64_t n = 0; n <= 96; ++n)
        CHECK(dfao_output(bc.dfao, n) == novel_set_naive(t, n).block_count);

    // The chained-count fixed point closes one round after the deepest block
    // nesting is reached.
    SyncBuildInfo info;
    build_count_sync(pred_novel(tm), {}, &info);
    CHECK(info.iterations <= bc.max_blocks + 1);
}

TEST_CASE("other built-in sequences run through the same pipeline") {
    for (auto make : {period_doubling_dfao, paperfolding_dfao}) {
        Dfao x = make();
        SyncFunction rho = build_rho_sync(x);
        PrefixView view = PrefixView::from_dfao(x);
        for (uint64_t n = 0; n <= 32; ++n)
            CHECK(eval_sync(rho, n) == count_naive(view, n, FactorKind::Factors));
    }

    // The step sequence 0,1,1,1,... has exactly two factors of every positive
    // length: 1^n and 01^(n-1).
    SyncFunction rho_step = build_rho_sync(step_dfao());
    CHECK(eval_sync(rho_step, 0) == 1);
    for (uint64_t n = 1; n <= 32; ++n) CHECK(eval_sync(rho_step, n) == 2);
}

TEST_CASE("evaluation failure modes are reported as typed errors") {
    // A graph pairing only n = 3 with value 7.
    Relation one_pair = rel_fixed_tuple(2, {"n", "m"}, {3, 7});
    SyncFunction partial{one_pair.dfa, "partial", 0};
    CHECK(eval_sync(partial, 3) == 7);
    CHECK_THROWS_AS(eval_sync(partial, 4), DomainError);
    CHECK_THROWS_AS(eval_sync(partial, 2), DomainError);

    // A graph pairing n = 3 with both 7 and 9. combine sorts variables, so
    // the track order must be restored before treating the DFA as a graph.
    Relation two_pairs = with_var_order(
        combine(one_pair, rel_fixed_tuple(2, {"n", "m"}, {3, 9}), BoolOp::Or), {"n", "m"});
    SyncFunction conflicted{two_pairs.dfa, "conflicted", 0};
    CHECK_THROWS_AS(eval_sync(conflicted, 3), InvariantError);

    uint64_t bad = 0;
    CHECK(!check_function_graph(partial, 8, &bad));
    CHECK(bad == 0); // 0 is the first n with no value
    CHECK(!check_function_graph(conflicted, 8, &bad));
}

TEST_CASE("iteration and state caps fail fast with typed errors") {
    Dfao tm = thue_morse_dfao();
    SyncBuildLimits tight;
    tight.iter_cap = 2;
    CHECK_THROWS_AS(build_count_sync(pred_novel(tm), tight), CapExceededError);

    SyncBuildLimits tiny;
    tiny.state_cap = 3;
    CHECK_THROWS_AS(build_rho_sync(tm, tiny), CapExceededError);
}

TEST_CASE("ratio extremes over an initial range") {
    Dfao tm = thue_morse_dfao();
    SyncFunction rho = build_rho_sync(tm);

    RatioExtremes one = ratio_extremes(rho, 1);
    CHECK(one.min.num == 2);
    CHECK(one.min.den == 1);
    CHECK(one.max.num == 2);
    CHECK(one.max.den == 1);

    RatioExtremes r = ratio_extremes(rho, 256);
    // min is rho(1)/1 = 2; max lies strictly between 3 and 4.
    CHECK(r.min.num == 2 * r.min.den);
    CHECK(r.max.num > 3 * r.max.den);
    CHECK(r.max.num < 4 * r.max.den);
}

TEST_CASE("synchronized function files round-trip with their headers") {
    Dfao tm = thue_morse_dfao();
    SyncFunction rho = build_rho_sync(tm);
    auto path = temp_file("t_synchro_rho.txt");
    save_sync_function_file(path.string(), rho, {"extra note"});
    SyncFunction back = load_sync_function_file(path.string());
    CHECK(equivalent(back.graph, rho.graph));
    CHECK(back.name == rho.name);
    CHECK(back.domain_floor == rho.domain_floor);
    for (uint64_t n = 0; n <= 16; ++n) CHECK(eval_sync(back, n) == eval_sync(rho, n));
    std::filesystem::remove(path);

    // Files carrying the wrong shape are rejected.
    Relation single = rel_const(2, "n", 5);
    auto bad_path = temp_file("t_synchro_bad.txt");
    std::vector<std::string> vars{"n"};
    save_automaton_file(bad_path.string(), single.dfa, &vars);
    CHECK_THROWS_AS(load_sync_function_file(bad_path.string()), MalformedInputError);
    std::filesystem::remove(bad_path);
}
