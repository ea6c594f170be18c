// numeration.hpp -- base-k digit words and multi-track symbol packing
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ksync/errors.hpp"

namespace ksync {

using Digit = uint32_t;
using Symbol = uint32_t; // packed tuple of per-track digits, see pack_symbol

// Alphabet of a t-track automaton over base k: symbols are t-tuples of digits.
struct DigitAlphabet {
    uint32_t base = 2;
    uint32_t tracks = 1;

    // k^t, the number of packed symbols.
    uint32_t symbol_count() const;
    bool operator==(const DigitAlphabet&) const = default;
};

// Packs digits (one per track, track 1 first) into a symbol index.
// Track 1 is the most significant position, so the all-zero tuple packs to 0.
Symbol pack_symbol(std::span<const Digit> digits, uint32_t base);

// Extracts the digit of `track` (0-based) from a packed symbol.
Digit symbol_digit(Symbol s, uint32_t track, const DigitAlphabet& a);

// Unpacks a symbol into one digit per track.
std::vector<Digit> unpack_symbol(Symbol s, const DigitAlphabet& a);

// A word over a multi-track digit alphabet, most significant symbol first.
// The empty word encodes the all-zero tuple.
struct TrackWord {
    DigitAlphabet alphabet;
    std::vector<Symbol> symbols;

    size_t size() const { return symbols.size(); }
    bool operator==(const TrackWord&) const = default;
    // Single-track words render as a digit string ("101011"), multi-track
    // ones as bracketed tuples ("[1,0][0,1]"). The empty word renders as "ε".
    std::string render() const;
};

// Canonical base-k digits of n, most significant first; 0 encodes as the
// empty word, so no canonical word has a leading zero.
std::vector<Digit> encode_base_k(uint64_t n, uint32_t base);

// Value of a digit word; leading zeros are accepted and ignored.
// Throws MalformedInputError if a digit is >= base.
uint64_t decode_base_k(std::span<const Digit> digits, uint32_t base);

// Encodes a tuple of values in lockstep: every component is padded with
// leading zeros to the longest canonical length. The all-zero tuple encodes
// as the empty word.
TrackWord encode_tuple(std::span<const uint64_t> values, uint32_t base);

// Digit word of the i-th track (1-based), padding zeros included.
std::vector<Digit> project_track(const TrackWord& w, uint32_t track);

// Decodes every track of w back into values.
std::vector<uint64_t> decode_tuple(const TrackWord& w);

// Renders a plain digit word the way single-track TrackWords render.
std::string render_digits(std::span<const Digit> digits, uint32_t base);

} // namespace ksync
