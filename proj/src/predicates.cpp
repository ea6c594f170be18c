#include "ksync/predicates.hpp"

#include <algorithm>
#include <set>

#include "ksync/errors.hpp"
#include "ksync/numeration.hpp"
#include "ksync/sequences.hpp"

namespace ksync {

namespace {

void check_base(uint32_t base) {
    if (base < 2) throw MalformedInputError("numeration base must be at least 2");
}

void check_distinct(const std::vector<std::string>& vars) {
    std::set<std::string> seen(vars.begin(), vars.end());
    if (seen.size() != vars.size())
        throw MalformedInputError("relation variables must be distinct");
}

size_t var_index(const Relation& p, const std::string& var) {
    auto it = std::find(p.vars.begin(), p.vars.end(), var);
    if (it == p.vars.end())
        throw MalformedInputError("unknown variable '" + var + "' in relation");
    return static_cast<size_t>(it - p.vars.begin());
}

Relation minimized(Relation p) {
    p.dfa = minimize(p.dfa);
    return p;
}

} // namespace

Relation rel_add(uint32_t base, const std::string& a, const std::string& b,
                 const std::string& c) {
    check_base(base);
    check_distinct({a, b, c});
    // Running value D of (a + b - c) over the digits read so far. Reading one
    // more column maps D to base*D + da + db - dc; only D in {0, -1} can still
    // reach 0, every other value escapes monotonically.
    Dfa d;
    d.alphabet = {base, 3};
    d.initial = 0;
    d.accepting = {1, 0, 0}; // state 0: D = 0, state 1: D = -1, state 2: dead
    uint32_t sc = d.alphabet.symbol_count();
    d.transitions.assign(size_t{3} * sc, 2);
    for (State q = 0; q < 2; ++q) {
        int64_t dv = (q == 0) ? 0 : -1;
        for (Symbol s = 0; s < sc; ++s) {
            int64_t da = symbol_digit(s, 0, d.alphabet);
            int64_t db = symbol_digit(s, 1, d.alphabet);
            int64_t dc = symbol_digit(s, 2, d.alphabet);
            int64_t nd = int64_t{base} * dv + da + db - dc;
            if (nd == 0)
                d.transitions[size_t{q} * sc + s] = 0;
            else if (nd == -1)
                d.transitions[size_t{q} * sc + s] = 1;
        }
    }
    return {std::move(d), {a, b, c}};
}

Relation rel_compare(uint32_t base, Cmp cmp, const std::string& a, const std::string& b) {
    check_base(base);
    check_distinct({a, b});
    // Most significant digit first: the first differing column decides.
    Dfa d;
    d.alphabet = {base, 2};
    d.initial = 0; // 0: equal so far, 1: a < b decided, 2: a > b decided
    switch (cmp) {
        case Cmp::Less: d.accepting = {0, 1, 0}; break;
        case Cmp::LessEq: d.accepting = {1, 1, 0}; break;
        case Cmp::Eq: d.accepting = {1, 0, 0}; break;
        case Cmp::NotEq: d.accepting = {0, 1, 1}; break;
    }
    uint32_t sc = d.alphabet.symbol_count();
    d.transitions.assign(size_t{3} * sc, 0);
    for (Symbol s = 0; s < sc; ++s) {
        Digit da = symbol_digit(s, 0, d.alphabet);
        Digit db = symbol_digit(s, 1, d.alphabet);
        State from0 = da == db ? 0 : (da < db ? 1 : 2);
        d.transitions[s] = from0;
        d.transitions[size_t{1} * sc + s] = 1;
        d.transitions[size_t{2} * sc + s] = 2;
    }
    return {std::move(d), {a, b}};
}

Relation rel_const(uint32_t base, const std::string& var, uint64_t value) {
    check_base(base);
    std::vector<Digit> digits = encode_base_k(value, base);
    // States 0..len count matched digits; state 0 also absorbs leading zeros.
    uint32_t len = static_cast<uint32_t>(digits.size());
    Dfa d;
    d.alphabet = {base, 1};
    d.initial = 0;
    State dead = len + 1;
    d.accepting.assign(size_t{len} + 2, 0);
    d.accepting[len] = 1;
    d.transitions.assign((size_t{len} + 2) * base, dead);
    d.transitions[0] = 0; // leading zeros
    for (uint32_t p = 0; p < len; ++p)
        d.transitions[size_t{p} * base + digits[p]] = p + 1;
    return {std::move(d), {var}};
}

Relation rel_universal(uint32_t base, const std::string& var) {
    check_base(base);
    Dfa d;
    d.alphabet = {base, 1};
    d.initial = 0;
    d.accepting = {1};
    d.transitions.assign(base, 0);
    return {std::move(d), {var}};
}

Relation rel_succ(uint32_t base, const std::string& a, const std::string& b) {
    check_distinct({a, b});
    std::string one = "#one";
    Relation r = combine(rel_const(base, one, 1), rel_add(base, a, one, b), BoolOp::And);
    return quantify(r, one, Quant::Exists);
}

Relation rel_fixed_tuple(uint32_t base, const std::vector<std::string>& vars,
                         const std::vector<uint64_t>& values) {
    check_base(base);
    check_distinct(vars);
    if (vars.empty() || vars.size() != values.size())
        throw MalformedInputError("fixed tuple needs one value per variable");
    TrackWord w = encode_tuple(values, base);
    uint32_t len = static_cast<uint32_t>(w.symbols.size());
    Dfa d;
    d.alphabet = w.alphabet;
    d.initial = 0;
    State dead = len + 1;
    uint32_t sc = d.alphabet.symbol_count();
    d.accepting.assign(size_t{len} + 2, 0);
    d.accepting[len] = 1;
    d.transitions.assign((size_t{len} + 2) * sc, dead);
    d.transitions[0] = 0; // all-zero columns pad on the left
    for (uint32_t p = 0; p < len; ++p)
        d.transitions[size_t{p} * sc + w.symbols[p]] = p + 1;
    return {std::move(d), vars};
}

Relation seq_eq_positions(const Dfao& x, const std::string& u, const std::string& v) {
    validate_sequence_dfao(x);
    check_distinct({u, v});
    uint32_t base = x.dfa.alphabet.base;
    size_t n = x.dfa.accepting.size();
    Dfa d;
    d.alphabet = {base, 2};
    uint32_t sc = d.alphabet.symbol_count();
    // Pair product of the sequence automaton with itself; every pair is
    // reachable or harmless, so the full grid is built directly.
    d.initial = x.dfa.initial * static_cast<State>(n) + x.dfa.initial;
    d.accepting.assign(n * n, 0);
    d.transitions.assign(n * n * sc, 0);
    for (size_t p = 0; p < n; ++p)
        for (size_t q = 0; q < n; ++q) {
            size_t pq = p * n + q;
            d.accepting[pq] = x.outputs[p] == x.outputs[q];
            for (Symbol s = 0; s < sc; ++s) {
                Digit du = symbol_digit(s, 0, d.alphabet);
                Digit dv = symbol_digit(s, 1, d.alphabet);
                State np = x.dfa.next(static_cast<State>(p), du);
                State nq = x.dfa.next(static_cast<State>(q), dv);
                d.transitions[pq * sc + s] = np * static_cast<State>(n) + nq;
            }
        }
    return minimized({std::move(d), {u, v}});
}

Relation seq_letter_at(const Dfao& x, uint32_t letter, const std::string& u) {
    validate_sequence_dfao(x);
    Dfa d = x.dfa;
    for (size_t q = 0; q < d.accepting.size(); ++q)
        d.accepting[q] = x.outputs[q] == letter;
    return minimized({std::move(d), {u}});
}

Relation combine(const Relation& p, const Relation& q, BoolOp op) {
    if (p.dfa.alphabet.base != q.dfa.alphabet.base)
        throw MalformedInputError("cannot combine relations over different bases");
    check_distinct(p.vars);
    check_distinct(q.vars);
    std::vector<std::string> target(p.vars.begin(), p.vars.end());
    target.insert(target.end(), q.vars.begin(), q.vars.end());
    std::sort(target.begin(), target.end());
    target.erase(std::unique(target.begin(), target.end()), target.end());

    auto spread = [&](const Relation& r) {
        std::vector<uint32_t> target_of(r.vars.size());
        for (size_t i = 0; i < r.vars.size(); ++i) {
            auto it = std::lower_bound(target.begin(), target.end(), r.vars[i]);
            target_of[i] = static_cast<uint32_t>(it - target.begin());
        }
        return spread_tracks(r.dfa, static_cast<uint32_t>(target.size()), target_of);
    };
    Dfa a = spread(p);
    Dfa b = spread(q);
    return {minimize(boolean_combine(a, b, op)), std::move(target)};
}

Relation negate(const Relation& p) {
    // Complement is exact because every relation automaton accepts all
    // zero-paddings of its satisfying tuples and nothing else.
    return {minimize(complement(p.dfa)), p.vars};
}

Relation quantify(const Relation& p, const std::string& var, Quant q, size_t state_cap) {
    if (p.vars.size() < 2)
        throw MalformedInputError("cannot quantify away the only variable of a relation");
    if (q == Quant::ForAll)
        return negate(quantify(negate(p), var, Quant::Exists, state_cap));
    size_t idx = var_index(p, var);
    std::vector<std::string> rest = p.vars;
    rest.erase(rest.begin() + static_cast<ptrdiff_t>(idx));
    Dfa d = project_and_determinize(p.dfa, static_cast<uint32_t>(idx) + 1, state_cap);
    return {std::move(d), std::move(rest)};
}

Relation renamed(const Relation& p, const std::map<std::string, std::string>& mapping) {
    std::vector<std::string> vars = p.vars;
    for (auto& v : vars) {
        auto it = mapping.find(v);
        if (it != mapping.end()) v = it->second;
    }
    check_distinct(vars);
    return {p.dfa, std::move(vars)};
}

Relation with_var_order(const Relation& p, const std::vector<std::string>& order) {
    check_distinct(order);
    if (order.size() != p.vars.size())
        throw MalformedInputError("variable order must list every variable exactly once");
    std::vector<uint32_t> perm(order.size());
    for (size_t i = 0; i < order.size(); ++i)
        perm[i] = static_cast<uint32_t>(var_index(p, order[i]));
    return {reorder_tracks(p.dfa, perm), order};
}

bool rel_accepts(const Relation& p, std::span<const uint64_t> values) {
    if (values.size() != p.vars.size())
        throw MalformedInputError("value count does not match relation arity");
    uint32_t base = p.dfa.alphabet.base;
    // Walk digit columns most significant first without materializing the
    // tuple word: column c of value v is digit floor(v / base^(w-1-c)) % base.
    uint32_t width = 0;
    for (uint64_t v : values) {
        uint32_t len = 0;
        for (uint64_t t = v; t > 0; t /= base) ++len;
        width = std::max(width, len);
    }
    std::vector<uint64_t> pow(width + 1, 1);
    for (uint32_t i = 1; i <= width; ++i) pow[i] = pow[i - 1] * base;
    State q = p.dfa.initial;
    for (uint32_t c = 0; c < width; ++c) {
        Symbol s = 0;
        for (size_t t = 0; t < values.size(); ++t) {
            Digit dig = static_cast<Digit>(values[t] / pow[width - 1 - c] % base);
            s = s * base + dig;
        }
        q = p.dfa.next(q, s);
    }
    return p.dfa.accepting[q] != 0;
}

// --- sequence predicates ----------------------------------------------------

Relation pred_factor_eq(const Dfao& x, size_t state_cap) {
    uint32_t k = x.dfa.alphabet.base;
    // Mismatch witness: some offset m < n with x[i+m] != x[j+m].
    Relation neq = negate(seq_eq_positions(x, "u", "v"));
    Relation at = combine(combine(rel_add(k, "i", "m", "u"), rel_add(k, "j", "m", "v"), BoolOp::And),
                          neq, BoolOp::And);
    at = quantify(quantify(at, "u", Quant::Exists, state_cap), "v", Quant::Exists, state_cap);
    Relation bad = combine(rel_compare(k, Cmp::Less, "m", "n"), at, BoolOp::And);
    Relation fe = negate(quantify(bad, "m", Quant::Exists, state_cap));
    return with_var_order(fe, {"i", "j", "n"});
}

Relation pred_novel(const Dfao& x, size_t state_cap) {
    uint32_t k = x.dfa.alphabet.base;
    Relation fe = pred_factor_eq(x, state_cap);
    Relation earlier = combine(rel_compare(k, Cmp::Less, "j", "i"), fe, BoolOp::And);
    Relation novel = negate(quantify(earlier, "j", Quant::Exists, state_cap));
    return with_var_order(novel, {"n", "i"});
}

namespace {

// (hi, lo, sh): x[u] = x[u + sh] for every u with lo <= u and u + sh <= hi.
// Vacuously true when the range is empty.
Relation shift_invariant(const Dfao& x, size_t state_cap) {
    uint32_t k = x.dfa.alphabet.base;
    Relation neq = negate(seq_eq_positions(x, "u", "v"));
    Relation bad = combine(combine(rel_compare(k, Cmp::LessEq, "lo", "u"),
                                   rel_add(k, "u", "sh", "v"), BoolOp::And),
                           combine(rel_compare(k, Cmp::LessEq, "v", "hi"), neq, BoolOp::And),
                           BoolOp::And);
    bad = quantify(quantify(bad, "v", Quant::Exists, state_cap), "u", Quant::Exists, state_cap);
    return negate(bad); // vars (hi, lo, sh)
}

} // namespace

Relation pred_is_power(const Dfao& x, size_t state_cap) {
    uint32_t k = x.dfa.alphabet.base;
    Relation shinv = shift_invariant(x, state_cap);

    // Shift d with 0 < d < j - i + 1, split point e = j + 1 - d.
    Relation frame = combine(rel_succ(k, "j", "#t"), rel_add(k, "e", "d", "#t"), BoolOp::And);
    frame = quantify(frame, "#t", Quant::Exists, state_cap); // (d, e, j)
    frame = combine(frame, rel_compare(k, Cmp::Less, "i", "e"), BoolOp::And);
    frame = combine(frame, negate(rel_const(k, "d", 0)), BoolOp::And);

    // Period d across the whole block.
    Relation periodic = renamed(shinv, {{"sh", "d"}, {"lo", "i"}, {"hi", "j"}});
    Relation body = combine(frame, periodic, BoolOp::And); // (d, e, i, j)

    // The length-d prefix also occurs starting at e, which pins the block to
    // the form u^t u' with the final period aligned; shift e - i compares
    // x[i..i+d-1] with x[e..j].
    Relation tailsh = combine(body, rel_add(k, "i", "#s", "e"), BoolOp::And);
    Relation recur = renamed(shinv, {{"sh", "#s"}, {"lo", "i"}, {"hi", "j"}});
    tailsh = combine(tailsh, recur, BoolOp::And);

    Relation pw = quantify(
        quantify(quantify(tailsh, "#s", Quant::Exists, state_cap), "e", Quant::Exists, state_cap),
        "d", Quant::Exists, state_cap);
    return with_var_order(pw, {"i", "j"});
}

Relation pred_novel_power(const Dfao& x, size_t state_cap) {
    uint32_t k = x.dfa.alphabet.base;
    // j = i + n - 1 for the length-n block starting at i.
    Relation span = combine(rel_add(k, "i", "n", "#t"), rel_succ(k, "j", "#t"), BoolOp::And);
    span = quantify(span, "#t", Quant::Exists, state_cap); // (i, j, n)
    Relation pw = combine(span, pred_is_power(x, state_cap), BoolOp::And);
    pw = quantify(pw, "j", Quant::Exists, state_cap); // (i, n)
    Relation r = combine(pw, pred_novel(x, state_cap), BoolOp::And);
    return with_var_order(r, {"n", "i"});
}

} // namespace ksync
