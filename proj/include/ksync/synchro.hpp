// synchro.hpp -- synchronized automata for counting functions over sequences
//
// A SyncFunction holds a two-track acceptor for the graph {(n, f(n))} of an
// integer function, both components encoded base k, most significant digit
// first, padded to a common length. Builders derive such graphs for position
// counts over an arbitrary two-variable predicate and, from there, for the
// distinct-factor count rho, the appearance function alpha (last position
// where a length-n factor occurs for the first time), and power/primitive
// factor counts of an automatic sequence. Evaluation walks the digits of n
// once per padding depth, so a query costs time linear in the digit count.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ksync/automata.hpp"
#include "ksync/predicates.hpp"

namespace ksync {

struct SyncFunction {
    Dfa graph;              // two tracks: (n, f(n))
    std::string name;       // label used in serialization comments
    uint64_t domain_floor = 0;
};

struct SyncBuildLimits {
    uint32_t iter_cap = 64;
    size_t state_cap = kDefaultStateCap;
};

struct SyncBuildInfo {
    uint32_t iterations = 0; // fixed-point rounds until the chain stabilized
    size_t states = 0;       // states of the finished graph automaton
};

// (n, s, e, l): within row n, scanning from position s upward, the next
// maximal run of positions satisfying pos starts at the least b >= s with
// pos(n, b), covers [b, e] entirely, stops before e + 1, and has length
// l = e + 1 - b >= 1. The run may instead be absent (l = 0), in which case
// e = s and no position at or after s satisfies pos. pos must be a
// two-variable relation, read positionally as (row, position).
Relation build_block_automaton(const Relation& pos, size_t state_cap = kDefaultStateCap);

// Graph of n -> total number of positions i with pos(n, i), computed as the
// least fixed point of chaining maximal runs left to right; the chain state
// carries the position just after the last run consumed. Throws
// CapExceededError if the chain has not stabilized after iter_cap rounds,
// which happens exactly when some rows contain unboundedly many runs.
SyncFunction build_count_sync(const Relation& pos, const SyncBuildLimits& limits = {},
                              SyncBuildInfo* info = nullptr);

// Graph of rho: the number of distinct length-n factors of the sequence,
// counted via first occurrences; rho(0) = 1 for the empty factor.
SyncFunction build_rho_sync(const Dfao& x, const SyncBuildLimits& limits = {},
                            SyncBuildInfo* info = nullptr);

// Graph of alpha: the largest position at which some length-n factor occurs
// for the first time; equivalently, the least m such that every length-n
// factor appears in the prefix of length m + n.
SyncFunction build_appearance_sync(const Dfao& x, const SyncBuildLimits& limits = {},
                                   SyncBuildInfo* info = nullptr);

// Graph of n -> number of distinct length-n factors that are powers (uv = vu
// with u, v nonempty); value 0 at n = 0.
SyncFunction build_power_count_sync(const Dfao& x, const SyncBuildLimits& limits = {},
                                    SyncBuildInfo* info = nullptr);

// Pointwise difference rho - power count: the number of distinct primitive
// length-n factors, the empty factor counting as primitive.
SyncFunction build_primitive_count_sync(const SyncFunction& rho, const SyncFunction& powers);
SyncFunction build_primitive_count_sync(const Dfao& x, const SyncBuildLimits& limits = {},
                                        SyncBuildInfo* info = nullptr);

// Single-track automaton whose output at n is the number of maximal runs in
// row n of pos; usable only when that count is uniformly bounded. max_blocks
// is the largest count attained. x is the sequence the predicate was derived
// from and pins the expected numeration base.
struct BlockCountAutomaton {
    Dfao dfao;
    uint32_t max_blocks = 0;
};

BlockCountAutomaton build_block_count_dfao(const Dfao& x, const Relation& pos,
                                           const SyncBuildLimits& limits = {});

struct EvalStats {
    uint64_t edges_visited = 0; // transition lookups across all padding depths
    uint32_t padding_used = 0;  // smallest padding depth that produced a value
};

// Evaluates f(n) by a backward-viability sweep plus a forward walk over the
// digits of n, at each padding depth from 0 until a value has been confirmed
// at two further depths (or, when no value appears, until a depth bound set
// by the automaton size proves the input has none). Throws DomainError when
// n has no value and InvariantError if the graph pairs n with two values.
uint64_t eval_sync(const SyncFunction& f, uint64_t n, EvalStats* stats = nullptr);

// Independent slow route: intersects the graph with a one-point constraint on
// the first track and extracts the shortest witness. Cross-checks eval_sync.
uint64_t eval_by_intersection(const SyncFunction& f, uint64_t n);

// Checks that every n in [domain_floor, n_max] has exactly one value, by
// intersection with per-n constraints; writes the first offender if any.
bool check_function_graph(const SyncFunction& f, uint64_t n_max,
                          uint64_t* first_bad = nullptr);

struct Fraction {
    uint64_t num = 0;
    uint64_t den = 1;
};

struct RatioExtremes {
    Fraction min;
    Fraction max;
};

// Exact min and max of f(n)/n over 1 <= n <= n_max, compared cross-multiplied.
RatioExtremes ratio_extremes(const SyncFunction& f, uint64_t n_max);

// --- serialization ----------------------------------------------------------

void save_sync_function_file(const std::string& path, const SyncFunction& f,
                             const std::vector<std::string>& extra_comments = {});
SyncFunction load_sync_function_file(const std::string& path);

} // namespace ksync
