#include "ksync/synchro.hpp"

#include <algorithm>
#include <map>

#include "ksync/errors.hpp"
#include "ksync/numeration.hpp"
#include "ksync/sequences.hpp"

namespace ksync {

namespace {

// Shared sub-relations for one position predicate.
struct PosParts {
    uint32_t base = 2;
    Relation pos;        // (n, i), names normalized
    Relation run;        // (e, l, n, s): maximal run of length l >= 1 from s
    Relation tail_empty; // (n, s): no position at or after s
};

Relation normalize_pos(const Relation& pos) {
    if (pos.vars.size() != 2)
        throw MalformedInputError("position predicate must have exactly two variables");
    Relation r = renamed(pos, {{pos.vars[0], "n"}, {pos.vars[1], "i"}});
    return with_var_order(r, {"n", "i"});
}

PosParts make_parts(const Relation& pos, size_t cap) {
    PosParts parts;
    parts.pos = normalize_pos(pos);
    uint32_t k = parts.pos.dfa.alphabet.base;
    parts.base = k;
    Relation at_p = renamed(parts.pos, {{"i", "p"}});

    // No position in [s, oo).
    Relation some_tail = combine(rel_compare(k, Cmp::LessEq, "s", "p"), at_p, BoolOp::And);
    parts.tail_empty = negate(quantify(some_tail, "p", Quant::Exists, cap));

    // No position in [s, b).
    Relation some_gap = combine(combine(rel_compare(k, Cmp::LessEq, "s", "p"),
                                        rel_compare(k, Cmp::Less, "p", "b"), BoolOp::And),
                                at_p, BoolOp::And);
    Relation gap_free = negate(quantify(some_gap, "p", Quant::Exists, cap));

    // Every point of [b, e] is a position.
    Relation some_hole = combine(combine(rel_compare(k, Cmp::LessEq, "b", "p"),
                                         rel_compare(k, Cmp::LessEq, "p", "e"), BoolOp::And),
                                 negate(at_p), BoolOp::And);
    Relation covered = negate(quantify(some_hole, "p", Quant::Exists, cap));

    // b + l = e + 1 and the run stops: no position at e + 1.
    Relation stop = combine(combine(rel_succ(k, "e", "t"), rel_add(k, "b", "l", "t"), BoolOp::And),
                            negate(renamed(parts.pos, {{"i", "t"}})), BoolOp::And);
    stop = quantify(stop, "t", Quant::Exists, cap);

    Relation run = combine(combine(rel_compare(k, Cmp::LessEq, "s", "b"), gap_free, BoolOp::And),
                           combine(covered, stop, BoolOp::And), BoolOp::And);
    run = combine(run, negate(rel_const(k, "l", 0)), BoolOp::And);
    parts.run = quantify(run, "b", Quant::Exists, cap); // (e, l, n, s)
    return parts;
}

// (l, n, r, s): a maximal run of length l >= 1 starts at or after s and r is
// the position just past its end.
Relation make_step(const PosParts& parts, size_t cap) {
    uint32_t k = parts.base;
    Relation step = combine(parts.run, rel_succ(k, "e", "r"), BoolOp::And);
    return quantify(step, "e", Quant::Exists, cap);
}

// Unions one concrete pair into a two-track graph. Operates on the raw DFAs:
// both sides already share the (n, m) track layout, and combine() would
// reorder tracks to sorted variable order.
Dfa adjoin_pair(const Dfa& graph, uint64_t n, uint64_t m) {
    Relation pair = rel_fixed_tuple(graph.alphabet.base, {"n", "m"}, {n, m});
    return minimize(boolean_combine(graph, pair.dfa, BoolOp::Or));
}

} // namespace

Relation build_block_automaton(const Relation& pos, size_t state_cap) {
    PosParts parts = make_parts(pos, state_cap);
    uint32_t k = parts.base;
    // Absent-run case: e = s, l = 0, and nothing at or after s.
    Relation empty_run = combine(combine(rel_compare(k, Cmp::Eq, "e", "s"),
                                         rel_const(k, "l", 0), BoolOp::And),
                                 parts.tail_empty, BoolOp::And);
    Relation r = combine(parts.run, empty_run, BoolOp::Or);
    return with_var_order(r, {"n", "s", "e", "l"});
}

SyncFunction build_count_sync(const Relation& pos, const SyncBuildLimits& limits,
                              SyncBuildInfo* info) {
    PosParts parts = make_parts(pos, limits.state_cap);
    uint32_t k = parts.base;
    size_t cap = limits.state_cap;
    Relation step = make_step(parts, cap);

    // Chain state (n, S, r): S positions consumed in runs that all lie before
    // r, and no run straddles r (r is 0 or just past a run's end).
    Relation m = combine(combine(rel_universal(k, "n"), rel_const(k, "S", 0), BoolOp::And),
                         rel_const(k, "r", 0), BoolOp::And);

    uint32_t rounds = 0;
    bool stable = false;
    while (rounds < limits.iter_cap) {
        ++rounds;
        // One more run: S' + l = S, resume position moves to r.
        Relation t = combine(renamed(m, {{"S", "Sp"}, {"r", "s"}}), step, BoolOp::And);
        t = quantify(t, "s", Quant::Exists, cap);
        t = combine(t, rel_add(k, "Sp", "l", "S"), BoolOp::And);
        t = quantify(quantify(t, "Sp", Quant::Exists, cap), "l", Quant::Exists, cap);
        Relation next = combine(m, t, BoolOp::Or);
        if (!is_empty_language(boolean_combine(m.dfa, next.dfa, BoolOp::AndNot)))
            throw InvariantError("count chain lost elements between rounds");
        if (equivalent(next.dfa, m.dfa)) {
            stable = true;
            m = std::move(next);
            break;
        }
        m = std::move(next);
    }
    if (!stable)
        throw CapExceededError(
            "run chaining did not stabilize within " + std::to_string(limits.iter_cap) +
            " rounds; some rows contain unboundedly many runs (as happens for the word "
            "formed by concatenating the binary numerals)");

    // Close the row: nothing at or after the final resume position.
    Relation fin = combine(m, renamed(parts.tail_empty, {{"s", "r"}}), BoolOp::And);
    fin = quantify(fin, "r", Quant::Exists, cap);
    fin = with_var_order(fin, {"n", "S"});

    SyncFunction f{std::move(fin.dfa), "count", 0};
    if (info) {
        info->iterations = rounds;
        info->states = f.graph.state_count();
    }
    return f;
}

SyncFunction build_rho_sync(const Dfao& x, const SyncBuildLimits& limits, SyncBuildInfo* info) {
    SyncFunction f = build_count_sync(pred_novel(x, limits.state_cap), limits, info);
    f.graph = adjoin_pair(f.graph, 0, 1);
    f.name = "rho";
    if (info) info->states = f.graph.state_count();
    return f;
}

SyncFunction build_appearance_sync(const Dfao& x, const SyncBuildLimits& limits,
                                   SyncBuildInfo* info) {
    size_t cap = limits.state_cap;
    uint32_t k = x.dfa.alphabet.base;
    Relation novel = pred_novel(x, cap); // (n, i)
    // m bounds every first occurrence and is itself one.
    Relation past = combine(novel, rel_compare(k, Cmp::Less, "m", "i"), BoolOp::And);
    Relation bound = negate(quantify(past, "i", Quant::Exists, cap));
    Relation g = combine(bound, renamed(novel, {{"i", "m"}}), BoolOp::And);
    g = with_var_order(g, {"n", "m"});
    SyncFunction f{std::move(g.dfa), "appearance", 0};
    if (info) {
        info->iterations = 0;
        info->states = f.graph.state_count();
    }
    return f;
}

SyncFunction build_power_count_sync(const Dfao& x, const SyncBuildLimits& limits,
                                    SyncBuildInfo* info) {
    SyncFunction f = build_count_sync(pred_novel_power(x, limits.state_cap), limits, info);
    f.graph = adjoin_pair(f.graph, 0, 0);
    f.name = "powers";
    if (info) info->states = f.graph.state_count();
    return f;
}

SyncFunction build_primitive_count_sync(const SyncFunction& rho, const SyncFunction& powers) {
    if (rho.graph.alphabet.base != powers.graph.alphabet.base)
        throw MalformedInputError("cannot compose graphs over different bases");
    uint32_t k = rho.graph.alphabet.base;
    Relation a{rho.graph, {"n", "a"}};
    Relation b{powers.graph, {"n", "b"}};
    Relation t = combine(combine(a, b, BoolOp::And), rel_add(k, "m", "b", "a"), BoolOp::And);
    t = quantify(quantify(t, "a", Quant::Exists), "b", Quant::Exists);
    t = with_var_order(t, {"n", "m"});
    return {std::move(t.dfa), "primitive", std::max(rho.domain_floor, powers.domain_floor)};
}

SyncFunction build_primitive_count_sync(const Dfao& x, const SyncBuildLimits& limits,
                                        SyncBuildInfo* info) {
    SyncBuildInfo ri, pi;
    SyncFunction rho = build_rho_sync(x, limits, &ri);
    SyncFunction powers = build_power_count_sync(x, limits, &pi);
    SyncFunction f = build_primitive_count_sync(rho, powers);
    if (info) {
        info->iterations = std::max(ri.iterations, pi.iterations);
        info->states = f.graph.state_count();
    }
    return f;
}

BlockCountAutomaton build_block_count_dfao(const Dfao& x, const Relation& pos,
                                           const SyncBuildLimits& limits) {
    validate_sequence_dfao(x);
    PosParts parts = make_parts(pos, limits.state_cap);
    if (parts.base != x.dfa.alphabet.base)
        throw MalformedInputError("position predicate and sequence use different bases");
    uint32_t k = parts.base;
    size_t cap = limits.state_cap;

    // (n, r, s) -> (n, r): one run consumed, scanning resumed at r.
    Relation step = quantify(make_step(parts, cap), "l", Quant::Exists, cap);
    Relation tail_r = renamed(parts.tail_empty, {{"s", "r"}});

    // reach = rows reachable with exactly i runs consumed; exact[i] = rows
    // whose scan ends right there.
    Relation reach = combine(rel_universal(k, "n"), rel_const(k, "r", 0), BoolOp::And);
    std::vector<Dfa> exact;
    exact.push_back(quantify(combine(reach, tail_r, BoolOp::And), "r", Quant::Exists, cap).dfa);
    uint32_t i = 0;
    while (true) {
        if (i >= limits.iter_cap)
            throw CapExceededError(
                "run count is not uniformly bounded across rows; gave up after " +
                std::to_string(limits.iter_cap) + " runs");
        Relation next = combine(renamed(reach, {{"r", "rp"}}), renamed(step, {{"s", "rp"}}),
                                BoolOp::And);
        next = quantify(next, "rp", Quant::Exists, cap);
        if (is_empty_language(next.dfa)) break;
        ++i;
        exact.push_back(quantify(combine(next, tail_r, BoolOp::And), "r", Quant::Exists, cap).dfa);
        reach = std::move(next);
    }

    // Assemble one DFAO: the output at n is the unique i whose language holds n.
    size_t parts_n = exact.size();
    Dfao out;
    out.dfa.alphabet = {k, 1};
    std::map<std::vector<State>, State> ids;
    std::vector<std::vector<State>> tuples;
    std::vector<State> start(parts_n);
    for (size_t j = 0; j < parts_n; ++j) start[j] = exact[j].initial;
    ids.emplace(start, 0);
    tuples.push_back(start);
    for (size_t q = 0; q < tuples.size(); ++q) {
        std::vector<State> cur = tuples[q];
        uint32_t value = 0, hits = 0;
        for (size_t j = 0; j < parts_n; ++j)
            if (exact[j].accepting[cur[j]]) {
                value = static_cast<uint32_t>(j);
                ++hits;
            }
        if (hits != 1)
            throw InvariantError("a row has " + std::to_string(hits) +
                                 " run counts; expected exactly one");
        out.dfa.accepting.push_back(0);
        out.outputs.push_back(value);
        for (Digit d = 0; d < k; ++d) {
            std::vector<State> nxt(parts_n);
            for (size_t j = 0; j < parts_n; ++j) nxt[j] = exact[j].next(cur[j], d);
            auto [it, fresh] = ids.emplace(nxt, static_cast<State>(tuples.size()));
            if (fresh) {
                if (tuples.size() >= limits.state_cap)
                    throw CapExceededError("run-count product exceeded the state cap");
                tuples.push_back(std::move(nxt));
            }
            out.dfa.transitions.push_back(it->second);
        }
    }
    out.dfa.initial = 0;
    out = minimize_dfao(out);
    return {std::move(out), static_cast<uint32_t>(parts_n - 1)};
}

// --- evaluation ---------------------------------------------------------------

namespace {

// One padding depth: backward viability over the layered graph, then the
// forward walk reading off the unique second-track digits.
std::optional<uint64_t> eval_at_padding(const Dfa& g, std::span<const Digit> nd, uint32_t s,
                                        uint64_t* edges) {
    uint32_t k = g.alphabet.base;
    size_t states = g.state_count();
    size_t len = nd.size() + s;
    std::vector<uint8_t> viable((len + 1) * states, 0);
    for (size_t q = 0; q < states; ++q) viable[len * states + q] = g.accepting[q];
    for (size_t p = len; p-- > 0;) {
        Digit d = p < s ? 0 : nd[p - s];
        bool any = false;
        for (size_t q = 0; q < states; ++q) {
            uint8_t ok = 0;
            for (Digit y = 0; y < k; ++y) {
                if (edges) ++*edges;
                ok |= viable[(p + 1) * states + g.next(static_cast<State>(q), d * k + y)];
            }
            viable[p * states + q] = ok;
            any = any || ok;
        }
        if (!any) return std::nullopt;
    }
    if (!viable[g.initial]) return std::nullopt;

    State q = g.initial;
    uint64_t value = 0;
    for (size_t p = 0; p < len; ++p) {
        Digit d = p < s ? 0 : nd[p - s];
        uint32_t picked = 0, options = 0;
        for (Digit y = 0; y < k; ++y) {
            if (edges) ++*edges;
            if (viable[(p + 1) * states + g.next(q, d * k + y)]) {
                picked = y;
                ++options;
            }
        }
        if (options == 0)
            throw InvariantError("viable state lost all continuations during the forward walk");
        if (options > 1)
            throw InvariantError("one input is paired with several values of the same digit length");
        if (value > (UINT64_MAX - picked) / k)
            throw CapExceededError("function value exceeds 64 bits");
        value = value * k + picked;
        q = g.next(q, d * k + picked);
    }
    return value;
}

} // namespace

uint64_t eval_sync(const SyncFunction& f, uint64_t n, EvalStats* stats) {
    const Dfa& g = f.graph;
    if (g.alphabet.tracks != 2)
        throw MalformedInputError("a synchronized graph must have exactly two tracks");
    if (n < f.domain_floor)
        throw DomainError("input " + std::to_string(n) + " is below the domain floor");
    std::vector<Digit> nd = encode_base_k(n, g.alphabet.base);

    // The value can have at most state_count() more digits than n: a longer
    // padding prefix repeats a state, and pumping the loop out would pair n
    // with a second value. Once a value is found, two further depths are
    // checked for agreement; they stay viable because acceptance is invariant
    // under leading zero columns.
    uint64_t edges = 0;
    std::optional<uint64_t> value;
    uint32_t found_at = 0;
    for (uint32_t s = 0;; ++s) {
        uint64_t limit = value ? uint64_t{found_at} + 2 : g.state_count() + 2;
        if (s > limit) break;
        std::optional<uint64_t> v = eval_at_padding(g, nd, s, &edges);
        if (!v) continue;
        if (value && *value != *v)
            throw InvariantError("padding depths disagree on the value");
        if (!value) {
            value = v;
            found_at = s;
            if (stats) stats->padding_used = s;
        }
    }
    if (stats) stats->edges_visited = edges;
    if (!value)
        throw DomainError("no value for input " + std::to_string(n));
    return *value;
}

uint64_t eval_by_intersection(const SyncFunction& f, uint64_t n) {
    uint32_t k = f.graph.alphabet.base;
    std::vector<uint32_t> first_track{0};
    Dfa fixed_n = spread_tracks(rel_const(k, "n", n).dfa, 2, first_track);
    Dfa slice = boolean_combine(f.graph, fixed_n, BoolOp::And);
    std::optional<TrackWord> w = shortest_witness(slice);
    if (!w) throw DomainError("no value for input " + std::to_string(n));
    return decode_tuple(*w)[1];
}

bool check_function_graph(const SyncFunction& f, uint64_t n_max, uint64_t* first_bad) {
    uint32_t k = f.graph.alphabet.base;
    std::vector<uint32_t> first_track{0};
    for (uint64_t n = f.domain_floor; n <= n_max; ++n) {
        Dfa fixed_n = spread_tracks(rel_const(k, "n", n).dfa, 2, first_track);
        Dfa slice = boolean_combine(f.graph, fixed_n, BoolOp::And);
        std::optional<TrackWord> w = shortest_witness(slice);
        bool ok = false;
        if (w) {
            uint64_t m = decode_tuple(*w)[1];
            Dfa that_pair = rel_fixed_tuple(k, {"n", "m"}, {n, m}).dfa;
            ok = is_empty_language(boolean_combine(slice, that_pair, BoolOp::AndNot));
        }
        if (!ok) {
            if (first_bad) *first_bad = n;
            return false;
        }
    }
    return true;
}

RatioExtremes ratio_extremes(const SyncFunction& f, uint64_t n_max) {
    if (n_max < 1) throw MalformedInputError("ratio scan needs a bound of at least 1");
    uint64_t start = std::max<uint64_t>(1, f.domain_floor);
    if (start > n_max) throw MalformedInputError("ratio scan range is empty");
    auto less = [](const Fraction& a, const Fraction& b) {
        return static_cast<unsigned __int128>(a.num) * b.den <
               static_cast<unsigned __int128>(b.num) * a.den;
    };
    RatioExtremes r;
    bool first = true;
    for (uint64_t n = start; n <= n_max; ++n) {
        Fraction cur{eval_sync(f, n), n};
        if (first || less(cur, r.min)) r.min = cur;
        if (first || less(r.max, cur)) r.max = cur;
        first = false;
    }
    return r;
}

// --- serialization ------------------------------------------------------------

void save_sync_function_file(const std::string& path, const SyncFunction& f,
                             const std::vector<std::string>& extra_comments) {
    std::vector<std::string> comments;
    if (!f.name.empty()) comments.push_back("synchronized function: " + f.name);
    comments.push_back("domain floor: " + std::to_string(f.domain_floor));
    comments.insert(comments.end(), extra_comments.begin(), extra_comments.end());
    std::vector<std::string> vars{"n", "m"};
    save_automaton_file(path, f.graph, &vars, nullptr, comments);
}

SyncFunction load_sync_function_file(const std::string& path) {
    ParsedAutomaton p = load_automaton_file(path);
    if (p.dfa.alphabet.tracks != 2)
        throw MalformedInputError("a synchronized function file must have two tracks");
    if (p.outputs)
        throw MalformedInputError("a synchronized function file must not carry outputs");
    SyncFunction f{std::move(p.dfa), "", 0};
    for (const std::string& c : p.comments) {
        if (c.rfind("synchronized function: ", 0) == 0) {
            f.name = c.substr(std::string("synchronized function: ").size());
        } else if (c.rfind("domain floor: ", 0) == 0) {
            f.domain_floor = std::stoull(c.substr(std::string("domain floor: ").size()));
        }
    }
    return f;
}

} // namespace ksync
