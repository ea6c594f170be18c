// oracles.cpp
#include "ksync/oracles.hpp"

#include <algorithm>
#include <cstring>
#include <unordered_map>

namespace ksync {

PrefixView PrefixView::from_dfao(const Dfao& m) {
    if (m.dfa.alphabet.tracks != 1)
        throw MalformedInputError("sequence automata must have exactly one track");
    if (m.dfa.next(m.dfa.initial, 0) != m.dfa.initial)
        throw MalformedInputError("sequence automaton must loop on digit 0 in its initial state");
    PrefixView v;
    v.letter_at_ = [m](uint64_t n) { return dfao_output(m, n); };
    return v;
}

PrefixView PrefixView::from_generator(std::function<uint32_t(uint64_t)> g) {
    PrefixView v;
    v.letter_at_ = std::move(g);
    return v;
}

PrefixView PrefixView::from_word(std::vector<uint32_t> w) {
    PrefixView v;
    v.buf_ = std::move(w);
    v.limit_ = v.buf_.size();
    return v;
}

std::span<const uint32_t> PrefixView::prefix(size_t length) {
    if (length > limit_)
        throw InstabilityError("prefix source is exhausted at " + std::to_string(limit_) +
                               " letters but " + std::to_string(length) + " were requested");
    if (buf_.size() < length) {
        size_t old = buf_.size();
        buf_.resize(length);
        for (size_t i = old; i < length; ++i) buf_[i] = letter_at_(i);
    }
    return {buf_.data(), length};
}

namespace {

// Double polynomial rolling hash; repeats are confirmed with an exact window
// comparison, so collisions cost time but never correctness.
constexpr uint64_t kMod = (uint64_t{1} << 61) - 1;

uint64_t mulmod(uint64_t a, uint64_t b) {
    __uint128_t p = static_cast<__uint128_t>(a) * b;
    uint64_t lo = static_cast<uint64_t>(p & kMod);
    uint64_t hi = static_cast<uint64_t>(p >> 61);
    uint64_t r = lo + hi;
    if (r >= kMod) r -= kMod;
    return r;
}

uint64_t addmod(uint64_t a, uint64_t b) {
    uint64_t r = a + b;
    if (r >= kMod) r -= kMod;
    return r;
}

struct PairHash {
    size_t operator()(const std::pair<uint64_t, uint64_t>& p) const {
        uint64_t x = p.first * 0x9e3779b97f4a7c15ull ^ p.second;
        x ^= x >> 33;
        x *= 0xc2b2ae3d27d4eb4full;
        x ^= x >> 29;
        return static_cast<size_t>(x);
    }
};

// First-occurrence positions of length-n windows of w, ascending.
std::vector<uint64_t> scan_novel(std::span<const uint32_t> w, uint64_t n) {
    std::vector<uint64_t> novel;
    if (n == 0 || w.size() < n) return novel;
    const size_t count = w.size() - n + 1;
    const uint64_t b1 = 0x1f3d5b79, b2 = 0x2e4a6c58;
    uint64_t pow1 = 1, pow2 = 1; // b^(n-1)
    for (uint64_t i = 0; i + 1 < n; ++i) {
        pow1 = mulmod(pow1, b1);
        pow2 = mulmod(pow2, b2);
    }
    uint64_t h1 = 0, h2 = 0;
    for (size_t i = 0; i < n; ++i) {
        h1 = addmod(mulmod(h1, b1), w[i] + 1);
        h2 = addmod(mulmod(h2, b2), w[i] + 1);
    }
    // Bucket values hold the first occurrence of each distinct factor whose
    // hash lands there; almost always a single entry.
    std::unordered_map<std::pair<uint64_t, uint64_t>, std::vector<size_t>, PairHash> seen;
    seen.reserve(count * 2);
    for (size_t i = 0;; ++i) {
        auto& bucket = seen[{h1, h2}];
        bool repeat = false;
        for (size_t first : bucket)
            if (std::memcmp(w.data() + first, w.data() + i, n * sizeof(uint32_t)) == 0) {
                repeat = true;
                break;
            }
        if (!repeat) {
            bucket.push_back(i);
            novel.push_back(i);
        }
        if (i + 1 == count) break;
        h1 = addmod(mulmod(addmod(h1, kMod - mulmod(pow1, w[i] + 1)), b1), w[i + n] + 1);
        h2 = addmod(mulmod(addmod(h2, kMod - mulmod(pow2, w[i] + 1)), b2), w[i + n] + 1);
    }
    return novel;
}

// Runs the stability rule and returns the agreed novel set.
std::vector<uint64_t> stable_novel(PrefixView& x, uint64_t n, const StabilityPolicy& policy) {
    size_t L = policy.initial_factor * static_cast<size_t>(n + 1);
    if (L > policy.hard_cap)
        throw InstabilityError("prefix budget exhausted before the first scan at length " +
                               std::to_string(L));
    std::vector<uint64_t> at_l = scan_novel(x.prefix(L), n);
    while (true) {
        if (2 * L > policy.hard_cap)
            throw InstabilityError("novel set for n=" + std::to_string(n) +
                                   " did not stabilize within " + std::to_string(policy.hard_cap) +
                                   " letters");
        std::vector<uint64_t> at_2l = scan_novel(x.prefix(2 * L), n);
        if (at_l == at_2l) return at_l;
        at_l = std::move(at_2l);
        L *= 2;
    }
}

// Longest proper border of every prefix (classic failure function).
std::vector<size_t> failure_function(std::span<const uint32_t> w) {
    std::vector<size_t> fail(w.size() + 1, 0);
    for (size_t i = 1; i < w.size(); ++i) {
        size_t b = fail[i];
        while (b > 0 && w[i] != w[b]) b = fail[b];
        fail[i + 1] = w[i] == w[b] ? b + 1 : 0;
    }
    return fail;
}

} // namespace

uint32_t count_blocks(std::span<const uint64_t> sorted_positions) {
    uint32_t blocks = 0;
    for (size_t i = 0; i < sorted_positions.size(); ++i)
        if (i == 0 || sorted_positions[i] != sorted_positions[i - 1] + 1) ++blocks;
    return blocks;
}

std::vector<uint64_t> novel_positions_of_word(std::span<const uint32_t> w, uint64_t n) {
    if (n == 0) return {0};
    return scan_novel(w, n);
}

NovelSet novel_set_naive(PrefixView& x, uint64_t n, const StabilityPolicy& policy) {
    NovelSet out;
    out.n = n;
    if (n == 0) {
        out.positions = {0}; // the empty factor occurs first at position 0
        out.block_count = 1;
        return out;
    }
    out.positions = stable_novel(x, n, policy);
    out.block_count = count_blocks(out.positions);
    return out;
}

uint64_t count_naive(PrefixView& x, uint64_t n, FactorKind kind, const StabilityPolicy& policy) {
    if (n == 0) {
        switch (kind) {
            case FactorKind::Factors: return 1;
            case FactorKind::Powers: return 0;
            case FactorKind::Primitive: return 1;
            case FactorKind::Unbordered: return 1;
        }
    }
    auto positions = stable_novel(x, n, policy);
    if (kind == FactorKind::Factors) return positions.size();
    auto w = x.prefix(static_cast<size_t>(positions.back() + n));
    uint64_t powers = 0, unbordered = 0;
    for (uint64_t p : positions) {
        std::span<const uint32_t> window = w.subspan(static_cast<size_t>(p), static_cast<size_t>(n));
        if (kind == FactorKind::Unbordered) {
            if (failure_function(window)[window.size()] == 0) ++unbordered;
        } else {
            if (word_structure(window).is_power) ++powers;
        }
    }
    switch (kind) {
        case FactorKind::Powers: return powers;
        case FactorKind::Primitive: return positions.size() - powers;
        case FactorKind::Unbordered: return unbordered;
        default: return positions.size();
    }
}

uint64_t appearance_naive(PrefixView& x, uint64_t n, const StabilityPolicy& policy) {
    auto set = novel_set_naive(x, n, policy);
    return set.positions.back(); // novel positions are never empty: 0 is always novel
}

WordStructure word_structure(std::span<const uint32_t> w) {
    if (w.empty()) throw MalformedInputError("word structure is defined for nonempty words only");
    WordStructure out;
    auto fail = failure_function(w);
    out.period = w.size() - fail[w.size()];
    out.is_power = out.period < w.size() && w.size() % out.period == 0;
    size_t root_len = out.is_power ? static_cast<size_t>(out.period) : w.size();
    out.primitive_root.assign(w.begin(), w.begin() + root_len);
    // Least rotation of the root, brute force; roots are short here.
    out.lyndon_root = out.primitive_root;
    std::vector<uint32_t> rot = out.primitive_root;
    for (size_t r = 1; r < root_len; ++r) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (std::lexicographical_compare(rot.begin(), rot.end(), out.lyndon_root.begin(),
                                         out.lyndon_root.end()))
            out.lyndon_root = rot;
    }
    return out;
}

bool power_gap_check(std::span<const uint32_t> z, uint64_t n) {
    if (n == 0 || z.size() < n) return true;
    const size_t count = z.size() - static_cast<size_t>(n) + 1;
    std::vector<uint8_t> is_pow(count, 0);
    std::vector<std::vector<uint32_t>> roots(count);
    for (size_t t = 0; t < count; ++t) {
        auto ws = word_structure(z.subspan(t, static_cast<size_t>(n)));
        is_pow[t] = ws.is_power;
        if (ws.is_power) roots[t] = std::move(ws.lyndon_root);
    }
    for (size_t i = 0; i < count; ++i) {
        if (!is_pow[i]) continue;
        for (size_t j = i + 1; j < count && 3 * (j - i) <= n; ++j) {
            if (!is_pow[j]) continue;
            for (size_t t = i; t <= j; ++t)
                if (!is_pow[t] || roots[t] != roots[i]) return false;
        }
    }
    return true;
}

} // namespace ksync
