// sequences.cpp
#include "ksync/sequences.hpp"

#include <bit>

namespace ksync {

namespace {

// Assembles a 1-track base-2 DFAO from a flat transition list.
Dfao make_dfao2(std::vector<State> trans, std::vector<uint32_t> outputs) {
    Dfao m;
    m.dfa.alphabet = {2, 1};
    m.dfa.initial = 0;
    m.dfa.accepting.assign(outputs.size(), 0);
    m.dfa.transitions = std::move(trans);
    m.outputs = std::move(outputs);
    return m;
}

} // namespace

Dfao thue_morse_dfao() {
    // State = parity of 1 bits read so far.
    return make_dfao2({0, 1, /**/ 1, 0}, {0, 1});
}

uint32_t thue_morse_at(uint64_t n) { return static_cast<uint32_t>(std::popcount(n) & 1); }

Dfao period_doubling_dfao() {
    // State 0: current run of trailing 1 bits has even length; state 1: odd.
    // A zero bit resets the run.
    return make_dfao2({0, 1, /**/ 0, 0}, {1, 0});
}

uint32_t period_doubling_at(uint64_t n) {
    return static_cast<uint32_t>(std::countr_one(n) & 1 ? 0 : 1);
}

Dfao paperfolding_dfao() {
    // The letter depends on the bit just above the lowest 1 bit, so the scan
    // tracks (class of the last 1 seen, previous bit). States:
    //   0 = no 1 seen yet, previous bit 0   (value for n = 0 lives here)
    //   1 = last 1 was preceded by 0, previous bit 1
    //   2 = last 1 was preceded by 0, previous bit 0
    //   3 = last 1 was preceded by 1, previous bit 1
    //   4 = last 1 was preceded by 1, previous bit 0
    return make_dfao2(
        {
            0, 1, // 0: on 0 stay, on 1 the new 1 is preceded by 0
            2, 3, // 1: prev bit is 1, a new 1 lands in the m%4==3 class
            2, 1, // 2: prev bit is 0, a new 1 lands in the m%4==1 class
            4, 3, // 3
            4, 1, // 4
        },
        {1, 1, 1, 0, 0});
}

uint32_t paperfolding_at(uint64_t n) {
    if (n == 0) return 1;
    uint64_t m = n >> std::countr_zero(n);
    return m % 4 == 1 ? 1 : 0;
}

Dfao powers_of_two_dfao() {
    // 0: only zeros so far; 1: exactly one 1 seen; 2: anything else.
    return make_dfao2({0, 1, /**/ 1, 2, /**/ 2, 2}, {0, 1, 0});
}

uint32_t powers_of_two_at(uint64_t n) { return n != 0 && (n & (n - 1)) == 0 ? 1 : 0; }

Dfao step_dfao() { return make_dfao2({0, 1, /**/ 1, 1}, {0, 1}); }

const std::vector<std::string>& builtin_sequence_names() {
    static const std::vector<std::string> names = {"thue_morse", "period_doubling",
                                                   "paperfolding", "powers_of_two_char"};
    return names;
}

std::optional<Dfao> builtin_dfao(const std::string& name) {
    if (name == "thue_morse") return thue_morse_dfao();
    if (name == "period_doubling") return period_doubling_dfao();
    if (name == "paperfolding") return paperfolding_dfao();
    if (name == "powers_of_two_char") return powers_of_two_dfao();
    return std::nullopt;
}

std::optional<std::function<uint32_t(uint64_t)>> builtin_generator(const std::string& name) {
    if (name == "thue_morse") return thue_morse_at;
    if (name == "period_doubling") return period_doubling_at;
    if (name == "paperfolding") return paperfolding_at;
    if (name == "powers_of_two_char") return powers_of_two_at;
    return std::nullopt;
}

void validate_sequence_dfao(const Dfao& m) {
    if (m.dfa.alphabet.tracks != 1)
        throw MalformedInputError("sequence automata must have exactly one track");
    if (m.outputs.size() != m.dfa.state_count())
        throw MalformedInputError("sequence automaton is missing output values");
    if (m.dfa.next(m.dfa.initial, 0) != m.dfa.initial)
        throw MalformedInputError(
            "sequence automaton must loop on digit 0 in its initial state; "
            "otherwise leading zeros would change letters");
}

std::vector<uint32_t> binary_numerals_word(size_t length) {
    std::vector<uint32_t> w;
    w.reserve(length + 64);
    for (uint64_t n = 1; w.size() < length; ++n) {
        auto digits = encode_base_k(n, 2);
        w.insert(w.end(), digits.begin(), digits.end());
    }
    w.resize(length);
    return w;
}

std::vector<uint32_t> power_gap_word(uint32_t i) {
    std::vector<uint32_t> w = {1, 2, 2, 1, 2, 2, 1, 2, 1, 2, 1, 2};
    for (uint32_t round = 0; round < i; ++round) {
        std::vector<uint32_t> next;
        next.reserve(w.size() * 2);
        for (uint32_t c : w) {
            next.push_back(2);
            next.push_back(c == 1 ? 1 : 2);
        }
        w = std::move(next);
    }
    return w;
}

} // namespace ksync
