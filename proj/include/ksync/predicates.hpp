// predicates.hpp -- named-variable relations and the predicate compiler
//
// A Relation is a complete DFA over tuple tracks together with one variable
// name per track. Logical operations align operands by variable name, insert
// unconstrained tracks for missing variables, and keep every intermediate
// automaton minimized and leading-zero invariant. Quantification projects a
// track away (exists) or dualizes through complement (forall); bounded
// quantifiers are expressed by conjoining an explicit range guard.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ksync/automata.hpp"

namespace ksync {

struct Relation {
    Dfa dfa;
    std::vector<std::string> vars; // vars[i] names track i+1
};

enum class Cmp { Less, LessEq, Eq, NotEq };
enum class Quant { Exists, ForAll };

// a + b = c, verified most significant digit first by tracking the running
// difference between the two sides.
Relation rel_add(uint32_t base, const std::string& a = "a", const std::string& b = "b",
                 const std::string& c = "c");

Relation rel_compare(uint32_t base, Cmp cmp, const std::string& a = "a",
                     const std::string& b = "b");

// Single-track relation fixing var to a concrete value.
Relation rel_const(uint32_t base, const std::string& var, uint64_t value);

// Single-track relation accepting every value.
Relation rel_universal(uint32_t base, const std::string& var);

// b = a + 1, composed from rel_const and rel_add.
Relation rel_succ(uint32_t base, const std::string& a, const std::string& b);

// Exactly the encodings of one fixed tuple (padding included).
Relation rel_fixed_tuple(uint32_t base, const std::vector<std::string>& vars,
                         const std::vector<uint64_t>& values);

// x[u] = x[v], built as a product of two copies of the sequence automaton.
Relation seq_eq_positions(const Dfao& x, const std::string& u = "u", const std::string& v = "v");

// x[u] = letter.
Relation seq_letter_at(const Dfao& x, uint32_t letter, const std::string& u = "u");

// Conjunction or disjunction with variable alignment; the result's variables
// are the sorted union of the operands' variables.
Relation combine(const Relation& p, const Relation& q, BoolOp op);

Relation negate(const Relation& p);

Relation quantify(const Relation& p, const std::string& var, Quant q,
                  size_t state_cap = kDefaultStateCap);

// Simultaneous renaming; resulting names must stay distinct. Track order is
// unchanged.
Relation renamed(const Relation& p, const std::map<std::string, std::string>& mapping);

// Reorders tracks to the given permutation of the variable set.
Relation with_var_order(const Relation& p, const std::vector<std::string>& order);

// Membership of a value assignment, listed in variable order.
bool rel_accepts(const Relation& p, std::span<const uint64_t> values);

// --- sequence predicates ----------------------------------------------------

// (i, j, n): the length-n factors at i and at j coincide.
Relation pred_factor_eq(const Dfao& x, size_t state_cap = kDefaultStateCap);

// (n, i): position i is the first occurrence of its length-n factor.
Relation pred_novel(const Dfao& x, size_t state_cap = kDefaultStateCap);

// (i, j): the factor x[i..j] is a power, i.e. splits as uv = vu with u, v
// nonempty, witnessed by a shift d with 0 < d <= j - i under which the block
// is periodic and whose length-d prefix recurs as the suffix.
Relation pred_is_power(const Dfao& x, size_t state_cap = kDefaultStateCap);

// (n, i): novel occurrence of a length-n factor that is a power.
Relation pred_novel_power(const Dfao& x, size_t state_cap = kDefaultStateCap);

} // namespace ksync
