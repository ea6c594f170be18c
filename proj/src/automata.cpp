// automata.cpp -- core automaton algebra
#include "ksync/automata.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <unordered_map>

namespace ksync {

namespace {

void check_same_alphabet(const DigitAlphabet& a, const DigitAlphabet& b) {
    if (!(a == b))
        throw MalformedInputError("alphabet mismatch: base " + std::to_string(a.base) + "/" +
                                  std::to_string(a.tracks) + " tracks vs base " +
                                  std::to_string(b.base) + "/" + std::to_string(b.tracks) +
                                  " tracks");
}

struct VecHash {
    size_t operator()(const std::vector<State>& v) const {
        size_t h = 1469598103934665603ull;
        for (State s : v) {
            h ^= s;
            h *= 1099511628211ull;
        }
        return h;
    }
};

// Drops states unreachable from the initial state.
Dfa trim_unreachable(const Dfa& a) {
    const uint32_t nsym = a.alphabet.symbol_count();
    std::vector<State> remap(a.state_count(), UINT32_MAX);
    std::vector<State> order;
    remap[a.initial] = 0;
    order.push_back(a.initial);
    for (size_t i = 0; i < order.size(); ++i) {
        State q = order[i];
        for (Symbol s = 0; s < nsym; ++s) {
            State t = a.next(q, s);
            if (remap[t] == UINT32_MAX) {
                remap[t] = static_cast<State>(order.size());
                order.push_back(t);
            }
        }
    }
    if (order.size() == a.state_count() && a.initial == 0) {
        bool identity = true;
        for (size_t i = 0; i < order.size() && identity; ++i) identity = remap[order[i]] == order[i];
        if (identity) return a;
    }
    Dfa out;
    out.alphabet = a.alphabet;
    out.initial = 0;
    out.accepting.resize(order.size());
    out.transitions.resize(order.size() * size_t{nsym});
    for (size_t i = 0; i < order.size(); ++i) {
        State q = order[i];
        out.accepting[i] = a.accepting[q];
        for (Symbol s = 0; s < nsym; ++s) out.transitions[i * nsym + s] = remap[a.next(q, s)];
    }
    return out;
}

// Hopcroft partition refinement. `klass` holds the initial partition label of
// each state; states may only end up merged within an initial class. Returns
// the refined block id of every state.
std::vector<uint32_t> hopcroft_refine(const Dfa& a, const std::vector<uint32_t>& klass) {
    const size_t n = a.state_count();
    const uint32_t nsym = a.alphabet.symbol_count();

    // Inverse transition table in compressed form, one slice per symbol.
    // Offsets are slice-local: rev_off[s*(n+1) + p] .. [.. + p + 1] delimit the
    // preimages of p under s inside rev_dat[s*n ..].
    std::vector<uint32_t> rev_off(size_t{nsym} * (n + 1), 0);
    std::vector<State> rev_dat(n * size_t{nsym});
    for (size_t q = 0; q < n; ++q)
        for (Symbol s = 0; s < nsym; ++s) rev_off[size_t{s} * (n + 1) + a.next(q, s) + 1]++;
    for (Symbol s = 0; s < nsym; ++s) {
        size_t base = size_t{s} * (n + 1);
        for (size_t p = 0; p < n; ++p) rev_off[base + p + 1] += rev_off[base + p];
    }
    {
        std::vector<uint32_t> cursor(rev_off);
        for (size_t q = 0; q < n; ++q)
            for (Symbol s = 0; s < nsym; ++s) {
                State p = a.next(q, s);
                rev_dat[size_t{s} * n + cursor[size_t{s} * (n + 1) + p]++] = static_cast<State>(q);
            }
    }
    auto preimages = [&](Symbol s, State p) {
        size_t base = size_t{s} * (n + 1);
        return std::pair<const State*, const State*>{
            rev_dat.data() + size_t{s} * n + rev_off[base + p],
            rev_dat.data() + size_t{s} * n + rev_off[base + p + 1]};
    };

    // Block storage: states grouped contiguously, marked states at the front.
    std::vector<State> elems(n);
    std::vector<size_t> loc(n);
    std::vector<uint32_t> block_of(n);
    std::vector<size_t> bbegin, bend, bmid;

    {
        std::vector<std::pair<uint32_t, State>> ordered;
        ordered.reserve(n);
        for (size_t q = 0; q < n; ++q) ordered.emplace_back(klass[q], static_cast<State>(q));
        std::sort(ordered.begin(), ordered.end());
        size_t i = 0;
        while (i < n) {
            size_t j = i;
            while (j < n && ordered[j].first == ordered[i].first) ++j;
            uint32_t b = static_cast<uint32_t>(bbegin.size());
            bbegin.push_back(i);
            bend.push_back(j);
            bmid.push_back(i);
            for (size_t t = i; t < j; ++t) {
                elems[t] = ordered[t].second;
                loc[ordered[t].second] = t;
                block_of[ordered[t].second] = b;
            }
            i = j;
        }
    }

    std::deque<std::pair<uint32_t, Symbol>> work;
    std::vector<uint8_t> in_work; // [block * nsym + symbol]
    in_work.assign(bbegin.size() * size_t{nsym}, 0);
    auto push_work = [&](uint32_t b, Symbol s) {
        if (!in_work[size_t{b} * nsym + s]) {
            in_work[size_t{b} * nsym + s] = 1;
            work.emplace_back(b, s);
        }
    };
    // Seeding every initial block keeps the code uniform for the DFAO case,
    // where the initial partition has one class per output value.
    for (uint32_t b = 0; b < bbegin.size(); ++b)
        for (Symbol s = 0; s < nsym; ++s) push_work(b, s);

    std::vector<uint32_t> touched;
    std::vector<State> splitter_elems;
    while (!work.empty()) {
        auto [splitter, sym] = work.front();
        work.pop_front();
        in_work[size_t{splitter} * nsym + sym] = 0;

        // Stable copy: marking swaps elements around inside their blocks, and
        // when the splitter marks its own states an index scan over its live
        // range would skip or repeat elements.
        splitter_elems.assign(elems.begin() + static_cast<ptrdiff_t>(bbegin[splitter]),
                              elems.begin() + static_cast<ptrdiff_t>(bend[splitter]));
        touched.clear();
        for (State e : splitter_elems) {
            auto [lo, hi] = preimages(sym, e);
            for (const State* p = lo; p != hi; ++p) {
                State q = *p;
                uint32_t b = block_of[q];
                if (bmid[b] == bbegin[b]) touched.push_back(b);
                size_t pos = loc[q];
                if (pos >= bmid[b]) { // not yet marked: swap to the marked front
                    State other = elems[bmid[b]];
                    elems[bmid[b]] = q;
                    elems[pos] = other;
                    loc[q] = bmid[b];
                    loc[other] = pos;
                    ++bmid[b];
                }
            }
        }
        for (uint32_t b : touched) {
            if (bmid[b] == bend[b]) { // every state marked: nothing to split
                bmid[b] = bbegin[b];
                continue;
            }
            size_t marked = bmid[b] - bbegin[b];
            size_t unmarked = bend[b] - bmid[b];
            // Carve the smaller side out as a fresh block; the remainder keeps
            // id b so queued work items stay meaningful.
            uint32_t nb = static_cast<uint32_t>(bbegin.size());
            size_t nb_lo, nb_hi;
            if (marked <= unmarked) {
                nb_lo = bbegin[b];
                nb_hi = bmid[b];
                bbegin[b] = bmid[b];
            } else {
                nb_lo = bmid[b];
                nb_hi = bend[b];
                bend[b] = bmid[b];
            }
            bmid[b] = bbegin[b];
            bbegin.push_back(nb_lo);
            bend.push_back(nb_hi);
            bmid.push_back(nb_lo);
            in_work.resize(in_work.size() + nsym, 0);
            for (size_t i = nb_lo; i < nb_hi; ++i) block_of[elems[i]] = nb;
            // nb is the smaller half. If (b,s) is still queued it now stands
            // for the remainder, so queueing (nb,s) covers both halves; if it
            // is not queued, queueing the smaller half is what keeps the
            // refinement O(n log n).
            for (Symbol s = 0; s < nsym; ++s) push_work(nb, s);
        }
    }
    return block_of;
}

// Quotient by block ids followed by canonical breadth-first renumbering.
Dfa quotient_canonical(const Dfa& a, const std::vector<uint32_t>& block_of,
                       std::vector<uint32_t>* block_to_new = nullptr) {
    const uint32_t nsym = a.alphabet.symbol_count();
    uint32_t nblocks = 0;
    for (uint32_t b : block_of) nblocks = std::max(nblocks, b + 1);

    std::vector<State> rep(nblocks, UINT32_MAX);
    for (size_t q = 0; q < a.state_count(); ++q)
        if (rep[block_of[q]] == UINT32_MAX) rep[block_of[q]] = static_cast<State>(q);

    std::vector<State> renum(nblocks, UINT32_MAX);
    std::vector<uint32_t> order;
    renum[block_of[a.initial]] = 0;
    order.push_back(block_of[a.initial]);
    for (size_t i = 0; i < order.size(); ++i) {
        uint32_t b = order[i];
        for (Symbol s = 0; s < nsym; ++s) {
            uint32_t t = block_of[a.next(rep[b], s)];
            if (renum[t] == UINT32_MAX) {
                renum[t] = static_cast<State>(order.size());
                order.push_back(t);
            }
        }
    }
    Dfa out;
    out.alphabet = a.alphabet;
    out.initial = 0;
    out.accepting.resize(order.size());
    out.transitions.resize(order.size() * size_t{nsym});
    for (size_t i = 0; i < order.size(); ++i) {
        State r = rep[order[i]];
        out.accepting[i] = a.accepting[r];
        for (Symbol s = 0; s < nsym; ++s)
            out.transitions[i * nsym + s] = renum[block_of[a.next(r, s)]];
    }
    if (block_to_new) *block_to_new = renum;
    return out;
}

} // namespace

State Dfa::run(std::span<const Symbol> word) const {
    State q = initial;
    for (Symbol s : word) q = next(q, s);
    return q;
}

bool accepts(const Dfa& a, const TrackWord& w) {
    check_same_alphabet(a.alphabet, w.alphabet);
    for (Symbol s : w.symbols)
        if (s >= a.alphabet.symbol_count())
            throw MalformedInputError("symbol out of range for alphabet");
    return a.accepting[a.run(w.symbols)] != 0;
}

uint32_t dfao_output(const Dfao& m, uint64_t n) {
    if (m.dfa.alphabet.tracks != 1)
        throw MalformedInputError("sequence automata must have exactly one track");
    auto digits = encode_base_k(n, m.dfa.alphabet.base);
    State q = m.dfa.initial;
    for (Digit d : digits) q = m.dfa.next(q, d);
    return m.outputs[q];
}

Dfa boolean_combine(const Dfa& a, const Dfa& b, BoolOp op) {
    check_same_alphabet(a.alphabet, b.alphabet);
    const uint32_t nsym = a.alphabet.symbol_count();
    auto key = [](State x, State y) { return (uint64_t{x} << 32) | y; };
    std::unordered_map<uint64_t, State> ids;
    std::vector<std::pair<State, State>> pairs;
    auto intern = [&](State x, State y) {
        auto [it, fresh] = ids.try_emplace(key(x, y), static_cast<State>(pairs.size()));
        if (fresh) pairs.emplace_back(x, y);
        return it->second;
    };
    auto flag = [&](State x, State y) -> bool {
        bool fa = a.accepting[x], fb = b.accepting[y];
        switch (op) {
            case BoolOp::And: return fa && fb;
            case BoolOp::Or: return fa || fb;
            case BoolOp::AndNot: return fa && !fb;
            case BoolOp::Xor: return fa != fb;
        }
        return false;
    };
    Dfa out;
    out.alphabet = a.alphabet;
    out.initial = intern(a.initial, b.initial);
    for (size_t i = 0; i < pairs.size(); ++i) {
        auto [x, y] = pairs[i];
        out.accepting.push_back(flag(x, y) ? 1 : 0);
        for (Symbol s = 0; s < nsym; ++s)
            out.transitions.push_back(intern(a.next(x, s), b.next(y, s)));
    }
    return out;
}

Dfa complement(const Dfa& a) {
    Dfa out = a;
    for (auto& f : out.accepting) f = f ? 0 : 1;
    return out;
}

Dfa determinize(const Nfa& n, size_t state_cap) {
    const uint32_t nsym = n.alphabet.symbol_count();
    std::unordered_map<std::vector<State>, State, VecHash> ids;
    std::vector<std::vector<State>> subsets;
    auto intern = [&](std::vector<State> set) {
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        auto [it, fresh] = ids.try_emplace(std::move(set), static_cast<State>(subsets.size()));
        if (fresh) {
            subsets.push_back(it->first);
            if (subsets.size() > state_cap)
                throw CapExceededError("subset construction exceeded the state cap of " +
                                       std::to_string(state_cap) + " states");
        }
        return it->second;
    };
    Dfa out;
    out.alphabet = n.alphabet;
    out.initial = intern(n.initials);
    std::vector<State> next_set;
    for (size_t i = 0; i < subsets.size(); ++i) {
        std::vector<State> cur = subsets[i];
        bool acc = false;
        for (State q : cur) acc = acc || n.accepting[q];
        out.accepting.push_back(acc ? 1 : 0);
        for (Symbol s = 0; s < nsym; ++s) {
            next_set.clear();
            for (State q : cur)
                for (State t : n.transitions[size_t{q} * nsym + s]) next_set.push_back(t);
            out.transitions.push_back(intern(next_set));
        }
    }
    return out;
}

Dfa normalize_leading_zeros(const Dfa& a_in, size_t state_cap) {
    // Minimizing first keeps the subset construction below over the smallest
    // possible state space.
    Dfa a = minimize(a_in);
    // Zero orbit of the initial state: everything reachable on zero columns.
    std::vector<uint8_t> seen(a.state_count(), 0);
    std::vector<State> orbit;
    for (State q = a.initial; !seen[q]; q = a.next(q, 0)) {
        seen[q] = 1;
        orbit.push_back(q);
    }
    if (orbit.size() == 1 && orbit[0] == a.initial) return a; // already invariant

    const uint32_t nsym = a.alphabet.symbol_count();
    std::unordered_map<std::vector<State>, State, VecHash> ids;
    std::vector<std::vector<State>> subsets;
    auto intern = [&](std::vector<State> set) {
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        auto [it, fresh] = ids.try_emplace(std::move(set), static_cast<State>(subsets.size()));
        if (fresh) {
            subsets.push_back(it->first);
            if (subsets.size() > state_cap)
                throw CapExceededError("leading-zero closure exceeded the state cap");
        }
        return it->second;
    };
    Dfa out;
    out.alphabet = a.alphabet;
    out.initial = intern(orbit);
    std::vector<State> next_set;
    for (size_t i = 0; i < subsets.size(); ++i) {
        std::vector<State> cur = subsets[i];
        bool acc = false;
        for (State q : cur) acc = acc || a.accepting[q];
        out.accepting.push_back(acc ? 1 : 0);
        for (Symbol s = 0; s < nsym; ++s) {
            next_set.clear();
            for (State q : cur) next_set.push_back(a.next(q, s));
            out.transitions.push_back(intern(next_set));
        }
    }
    return out;
}

Dfa project_and_determinize(const Dfa& a, uint32_t track, size_t state_cap) {
    if (track == 0 || track > a.alphabet.tracks)
        throw MalformedInputError("track index " + std::to_string(track) + " out of range");
    if (a.alphabet.tracks == 1)
        throw MalformedInputError("cannot erase the only track of an automaton");
    const uint32_t t0 = track - 1;
    Nfa n;
    n.alphabet = {a.alphabet.base, a.alphabet.tracks - 1};
    const uint32_t nsym_out = n.alphabet.symbol_count();
    n.initials = {a.initial};
    n.accepting = a.accepting;
    n.transitions.resize(a.state_count() * size_t{nsym_out});
    const uint32_t nsym_in = a.alphabet.symbol_count();
    std::vector<Symbol> reduced(nsym_in);
    for (Symbol s = 0; s < nsym_in; ++s) {
        auto digits = unpack_symbol(s, a.alphabet);
        digits.erase(digits.begin() + t0);
        reduced[s] = pack_symbol(digits, a.alphabet.base);
    }
    for (size_t q = 0; q < a.state_count(); ++q)
        for (Symbol s = 0; s < nsym_in; ++s)
            n.transitions[q * nsym_out + reduced[s]].push_back(a.next(q, s));
    // Zero-closing the initial set restores leading-zero invariance in one
    // pass: erased-track digits under a run of all-zero remaining columns may
    // be anything, so every state reachable on reduced symbol 0 can start.
    std::vector<uint8_t> closed(a.state_count(), 0);
    std::vector<State> stack{a.initial};
    closed[a.initial] = 1;
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (State t : n.transitions[size_t{q} * nsym_out])
            if (!closed[t]) {
                closed[t] = 1;
                stack.push_back(t);
            }
    }
    n.initials.clear();
    for (size_t q = 0; q < a.state_count(); ++q)
        if (closed[q]) n.initials.push_back(static_cast<State>(q));
    return minimize(determinize(n, state_cap));
}

Dfa minimize(const Dfa& a) {
    Dfa t = trim_unreachable(a);
    std::vector<uint32_t> klass(t.state_count());
    for (size_t q = 0; q < t.state_count(); ++q) klass[q] = t.accepting[q] ? 1 : 0;
    auto blocks = hopcroft_refine(t, klass);
    return quotient_canonical(t, blocks);
}

bool equivalent(const Dfa& a, const Dfa& b) {
    check_same_alphabet(a.alphabet, b.alphabet);
    Dfa ma = minimize(a), mb = minimize(b);
    return ma.accepting == mb.accepting && ma.transitions == mb.transitions;
}

bool is_empty_language(const Dfa& a) {
    Dfa t = trim_unreachable(a);
    for (auto f : t.accepting)
        if (f) return false;
    return true;
}

std::optional<TrackWord> shortest_witness(const Dfa& a) {
    const uint32_t nsym = a.alphabet.symbol_count();
    std::vector<std::pair<State, Symbol>> parent(a.state_count(), {UINT32_MAX, 0});
    std::vector<uint8_t> seen(a.state_count(), 0);
    std::queue<State> bfs;
    seen[a.initial] = 1;
    bfs.push(a.initial);
    State hit = UINT32_MAX;
    if (a.accepting[a.initial]) hit = a.initial;
    while (!bfs.empty() && hit == UINT32_MAX) {
        State q = bfs.front();
        bfs.pop();
        for (Symbol s = 0; s < nsym && hit == UINT32_MAX; ++s) {
            State t = a.next(q, s);
            if (!seen[t]) {
                seen[t] = 1;
                parent[t] = {q, s};
                if (a.accepting[t]) hit = t;
                bfs.push(t);
            }
        }
    }
    if (hit == UINT32_MAX) return std::nullopt;
    TrackWord w;
    w.alphabet = a.alphabet;
    for (State q = hit; q != a.initial;) {
        auto [p, s] = parent[q];
        w.symbols.push_back(s);
        q = p;
    }
    std::reverse(w.symbols.begin(), w.symbols.end());
    return w;
}

Dfa reorder_tracks(const Dfa& a, std::span<const uint32_t> perm) {
    if (perm.size() != a.alphabet.tracks)
        throw MalformedInputError("track permutation has the wrong length");
    const uint32_t nsym = a.alphabet.symbol_count();
    std::vector<Symbol> source(nsym);
    std::vector<Digit> od(a.alphabet.tracks);
    for (Symbol ns = 0; ns < nsym; ++ns) {
        auto nd = unpack_symbol(ns, a.alphabet);
        for (uint32_t j = 0; j < a.alphabet.tracks; ++j) od[perm[j]] = nd[j];
        source[ns] = pack_symbol(od, a.alphabet.base);
    }
    Dfa out = a;
    for (size_t q = 0; q < a.state_count(); ++q)
        for (Symbol ns = 0; ns < nsym; ++ns)
            out.transitions[q * nsym + ns] = a.transitions[q * nsym + source[ns]];
    return out;
}

Dfa spread_tracks(const Dfa& a, uint32_t target_tracks, std::span<const uint32_t> target_of) {
    if (target_of.size() != a.alphabet.tracks || target_tracks < a.alphabet.tracks)
        throw MalformedInputError("invalid track spread");
    DigitAlphabet na{a.alphabet.base, target_tracks};
    const uint32_t nsym_new = na.symbol_count();
    std::vector<Symbol> source(nsym_new);
    std::vector<Digit> sd(a.alphabet.tracks);
    for (Symbol ns = 0; ns < nsym_new; ++ns) {
        auto nd = unpack_symbol(ns, na);
        for (uint32_t i = 0; i < a.alphabet.tracks; ++i) sd[i] = nd[target_of[i]];
        source[ns] = pack_symbol(sd, a.alphabet.base);
    }
    Dfa out;
    out.alphabet = na;
    out.initial = a.initial;
    out.accepting = a.accepting;
    out.transitions.resize(a.state_count() * size_t{nsym_new});
    for (size_t q = 0; q < a.state_count(); ++q)
        for (Symbol ns = 0; ns < nsym_new; ++ns)
            out.transitions[q * nsym_new + ns] = a.next(q, source[ns]);
    return out;
}

Dfao minimize_dfao(const Dfao& m) {
    if (m.outputs.size() != m.dfa.state_count())
        throw MalformedInputError("output map does not cover every state");
    Dfa t = trim_unreachable(m.dfa);
    // trim_unreachable renumbers; recover outputs through a parallel walk.
    std::vector<uint32_t> outs(t.state_count());
    {
        // Match states of t to states of m.dfa by breadth-first traversal of
        // both in lockstep; the renumbering in trim_unreachable is exactly
        // breadth-first discovery order when it rebuilds, identity otherwise.
        const uint32_t nsym = m.dfa.alphabet.symbol_count();
        std::vector<State> old_of(t.state_count(), UINT32_MAX);
        std::vector<uint8_t> seen(t.state_count(), 0);
        std::queue<std::pair<State, State>> bfs;
        bfs.push({t.initial, m.dfa.initial});
        seen[t.initial] = 1;
        old_of[t.initial] = m.dfa.initial;
        while (!bfs.empty()) {
            auto [qt, qm] = bfs.front();
            bfs.pop();
            for (Symbol s = 0; s < nsym; ++s) {
                State nt = t.next(qt, s), nm = m.dfa.next(qm, s);
                if (!seen[nt]) {
                    seen[nt] = 1;
                    old_of[nt] = nm;
                    bfs.push({nt, nm});
                }
            }
        }
        for (size_t q = 0; q < t.state_count(); ++q) outs[q] = m.outputs[old_of[q]];
    }
    auto blocks = hopcroft_refine(t, outs);
    std::vector<uint32_t> block_to_new;
    Dfa q = quotient_canonical(t, blocks, &block_to_new);
    Dfao out;
    out.dfa = q;
    out.outputs.resize(q.state_count());
    for (size_t s = 0; s < t.state_count(); ++s) out.outputs[block_to_new[blocks[s]]] = outs[s];
    return out;
}

bool dfao_equivalent(const Dfao& a, const Dfao& b) {
    check_same_alphabet(a.dfa.alphabet, b.dfa.alphabet);
    Dfao ma = minimize_dfao(a), mb = minimize_dfao(b);
    return ma.outputs == mb.outputs && ma.dfa.transitions == mb.dfa.transitions;
}

} // namespace ksync
