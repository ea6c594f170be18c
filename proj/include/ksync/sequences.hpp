// sequences.hpp -- built-in automatic sequences and witness words
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ksync/automata.hpp"

namespace ksync {

// Each built-in ships twice: as a base-2 DFAO and as a direct arithmetic
// rule. Tests cross-check the two against each other.

// Parity of the number of 1 bits of n: 0, 1, 1, 0, 1, 0, 0, 1, ...
Dfao thue_morse_dfao();
uint32_t thue_morse_at(uint64_t n);

// 1 when the count of trailing 1 bits of n is even: 1, 0, 1, 1, 1, 0, 1, 0, ...
// Equals thue_morse_at(n) XOR thue_morse_at(n+1).
Dfao period_doubling_dfao();
uint32_t period_doubling_at(uint64_t n);

// Regular paperfolding rule for n >= 1: write n = m * 2^j with m odd; the
// letter is 1 when m % 4 == 1. The rule says nothing about n = 0; index 0 is
// fixed to 1 here.
Dfao paperfolding_dfao();
uint32_t paperfolding_at(uint64_t n);

// Characteristic sequence of powers of two: 0, 1, 1, 0, 1, 0, 0, 0, 1, ...
Dfao powers_of_two_dfao();
uint32_t powers_of_two_at(uint64_t n);

// 0 at n = 0, then 1 forever; the smallest nontrivial test sequence.
Dfao step_dfao();

const std::vector<std::string>& builtin_sequence_names();
std::optional<Dfao> builtin_dfao(const std::string& name);
std::optional<std::function<uint32_t(uint64_t)>> builtin_generator(const std::string& name);

// Checks the structural requirements a sequence DFAO must satisfy here:
// single track and a zero loop on the initial state (so leading zeros do not
// change the letter). Throws MalformedInputError otherwise.
void validate_sequence_dfao(const Dfao& m);

// Prefix of the word formed by concatenating the base-2 numerals of
// 1, 2, 3, ...: 1 10 11 100 101 110 111 1000 ...
std::vector<uint32_t> binary_numerals_word(size_t length);

// i-fold image of 122122121212 under the morphism 1 -> 21, 2 -> 22.
// Length 12 * 2^i; the extremal witness for power-block gaps.
std::vector<uint32_t> power_gap_word(uint32_t i);

} // namespace ksync
