// oracles.hpp -- brute-force reference computations over sequence prefixes
//
// Everything here is deliberately direct: scan a prefix, compare windows,
// count. These routines are the ground truth the automaton constructions are
// validated against, so they never share code with the automaton path.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ksync/automata.hpp"

namespace ksync {

// Lazily materialized prefix of an infinite sequence.
class PrefixView {
public:
    static PrefixView from_dfao(const Dfao& m);
    static PrefixView from_generator(std::function<uint32_t(uint64_t)> g);
    // A finite source; asking beyond its length raises InstabilityError.
    static PrefixView from_word(std::vector<uint32_t> w);

    // First `length` letters; cached across calls.
    std::span<const uint32_t> prefix(size_t length);

private:
    std::function<uint32_t(uint64_t)> letter_at_;
    std::vector<uint32_t> buf_;
    size_t limit_ = SIZE_MAX; // finite sources only
};

// Prefix budget for the stability rule: results are computed on a prefix of
// length L and again at 2L and must agree; L starts at initial_factor*(n+1)
// and doubles until agreement or until 2L would exceed hard_cap.
struct StabilityPolicy {
    size_t initial_factor = 32;
    size_t hard_cap = size_t{1} << 22;
};

// Positions of first occurrences of length-n factors, in increasing order,
// and the number of contiguous runs they form.
struct NovelSet {
    uint64_t n = 0;
    std::vector<uint64_t> positions;
    uint32_t block_count = 0;
};

NovelSet novel_set_naive(PrefixView& x, uint64_t n, const StabilityPolicy& policy = {});

// Exact novel positions of a finite word (positions i <= |w| - n only).
std::vector<uint64_t> novel_positions_of_word(std::span<const uint32_t> w, uint64_t n);

uint32_t count_blocks(std::span<const uint64_t> sorted_positions);

enum class FactorKind { Factors, Powers, Primitive, Unbordered };

// Number of distinct length-n factors of the given kind. Length 0 counts the
// empty factor as one primitive, unbordered non-power, keeping
// Factors == Powers + Primitive at every length.
uint64_t count_naive(PrefixView& x, uint64_t n, FactorKind kind, const StabilityPolicy& policy = {});

// Least m such that every length-n factor occurs in x[0 .. m+n-1]; equals the
// largest first-occurrence position.
uint64_t appearance_naive(PrefixView& x, uint64_t n, const StabilityPolicy& policy = {});

struct WordStructure {
    uint64_t period = 0;                 // smallest period
    std::vector<uint32_t> primitive_root; // w == root^e with root primitive
    std::vector<uint32_t> lyndon_root;    // least rotation of the primitive root
    bool is_power = false;                // root repeats at least twice
};

WordStructure word_structure(std::span<const uint32_t> w);

// Checks the power-block sharing property on a finite word: whenever two
// length-n power occurrences start at i < j with 3(j-i) <= n, every position
// between them is a length-n power occurrence too and all of them share the
// Lyndon root of the occurrence at i.
bool power_gap_check(std::span<const uint32_t> z, uint64_t n);

} // namespace ksync
