// automata.hpp -- multi-track DFA/NFA/DFAO algebra over base-k digit tuples
//
// Every automaton here is complete (one transition per state and symbol) and
// reads most-significant digits first. Automata built by this library are kept
// leading-zero invariant: whether a word is accepted depends only on the value
// tuple it encodes, never on how many zero columns pad it on the left.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ksync/numeration.hpp"

namespace ksync {

using State = uint32_t;

inline constexpr size_t kDefaultStateCap = 1'000'000;

// Complete deterministic automaton. transitions is a row-major table of
// state_count() x symbol_count() entries.
struct Dfa {
    DigitAlphabet alphabet;
    State initial = 0;
    std::vector<uint8_t> accepting;  // one flag per state
    std::vector<State> transitions;  // [q * symbol_count() + s] -> state

    size_t state_count() const { return accepting.size(); }
    State next(State q, Symbol s) const { return transitions[size_t{q} * alphabet.symbol_count() + s]; }
    State& next_ref(State q, Symbol s) { return transitions[size_t{q} * alphabet.symbol_count() + s]; }
    // Runs the word from the initial state; no acceptance check.
    State run(std::span<const Symbol> word) const;
};

// Nondeterministic automaton used as an intermediate for projection.
struct Nfa {
    DigitAlphabet alphabet;
    std::vector<State> initials;
    std::vector<uint8_t> accepting;
    // [q * symbol_count() + s] -> successor list
    std::vector<std::vector<State>> transitions;

    size_t state_count() const { return accepting.size(); }
};

// Deterministic automaton with per-state output instead of acceptance.
struct Dfao {
    Dfa dfa; // accepting flags are ignored
    std::vector<uint32_t> outputs;
};

bool accepts(const Dfa& a, const TrackWord& w);

// Output attached to the state reached by the canonical encoding of n.
uint32_t dfao_output(const Dfao& m, uint64_t n);

enum class BoolOp { And, Or, AndNot, Xor };

// Product construction restricted to reachable pairs.
// Throws MalformedInputError if the alphabets differ.
Dfa boolean_combine(const Dfa& a, const Dfa& b, BoolOp op);

// Flips acceptance. Exact complement of the represented relation because
// automata here accept every padding of a satisfying tuple.
Dfa complement(const Dfa& a);

// Erases one track (1-based), determinizes the resulting NFA, restores
// leading-zero invariance, and minimizes. Throws CapExceededError when the
// subset construction would exceed state_cap states.
Dfa project_and_determinize(const Dfa& a, uint32_t track, size_t state_cap = kDefaultStateCap);

Dfa determinize(const Nfa& n, size_t state_cap = kDefaultStateCap);

// Closes the language under removal of leading zero columns: the result
// accepts w iff a accepts 0^s w for some s >= 0. Sound on automata whose
// language is closed under adding zero columns, which holds for every
// automaton produced by a projection here.
Dfa normalize_leading_zeros(const Dfa& a, size_t state_cap = kDefaultStateCap);

// Canonical minimization: unreachable states dropped, Hopcroft refinement,
// then a breadth-first renumbering from the initial state with symbols taken
// in increasing order. Language-equal inputs minimize to identical structures.
Dfa minimize(const Dfa& a);

// Language equality via comparison of canonical forms.
bool equivalent(const Dfa& a, const Dfa& b);

bool is_empty_language(const Dfa& a);

// Lexicographically least among the shortest accepted words; nullopt when the
// language is empty.
std::optional<TrackWord> shortest_witness(const Dfa& a);

// Reorders tracks: track j of the result carries track perm[j] (0-based) of
// the input.
Dfa reorder_tracks(const Dfa& a, std::span<const uint32_t> perm);

// Rebuilds a onto a wider alphabet. target_of[i] names the target track
// (0-based) that carries input track i; target tracks not named are
// unconstrained. Strictly widening: target_tracks >= a.alphabet.tracks.
Dfa spread_tracks(const Dfa& a, uint32_t target_tracks, std::span<const uint32_t> target_of);

// DFAO minimization: states merged only when their whole output behavior
// agrees; canonical numbering as in minimize().
Dfao minimize_dfao(const Dfao& m);

bool dfao_equivalent(const Dfao& a, const Dfao& b);

// --- serialization ---------------------------------------------------------
//
// Text format, one item per line, '#' starts a comment:
//   base 2 tracks 2
//   states 5 initial 0
//   accepting 1 3
//   vars n m              (optional; written for relations)
//   0 [0,1] 2             (one line per state/symbol pair; totality required)
//   output 0 1            (DFAO only, one line per state)

struct ParsedAutomaton {
    Dfa dfa;
    std::optional<std::vector<uint32_t>> outputs;
    std::optional<std::vector<std::string>> vars;
    std::vector<std::string> comments; // '#' header lines, markers stripped
};

ParsedAutomaton load_automaton(std::istream& in);
ParsedAutomaton load_automaton_file(const std::string& path);

void save_automaton(std::ostream& out, const Dfa& a,
                    const std::vector<std::string>* vars = nullptr,
                    const std::vector<uint32_t>* outputs = nullptr,
                    const std::vector<std::string>& comments = {});
void save_automaton_file(const std::string& path, const Dfa& a,
                         const std::vector<std::string>* vars = nullptr,
                         const std::vector<uint32_t>* outputs = nullptr,
                         const std::vector<std::string>& comments = {});

// GraphViz rendering. Acceptor rendering omits dead states (states from which
// no accepting state is reachable); DFAO rendering labels states q/output and
// keeps everything.
std::string to_dot(const Dfa& a, const std::vector<uint32_t>* outputs = nullptr);

} // namespace ksync
