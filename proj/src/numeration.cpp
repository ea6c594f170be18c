// numeration.cpp
#include "ksync/numeration.hpp"

#include <algorithm>
#include <limits>

namespace ksync {

uint32_t DigitAlphabet::symbol_count() const {
    uint64_t n = 1;
    for (uint32_t i = 0; i < tracks; ++i) {
        n *= base;
        if (n > std::numeric_limits<uint32_t>::max())
            throw MalformedInputError("alphabet too large: base " + std::to_string(base) +
                                      " with " + std::to_string(tracks) + " tracks");
    }
    return static_cast<uint32_t>(n);
}

Symbol pack_symbol(std::span<const Digit> digits, uint32_t base) {
    Symbol s = 0;
    for (Digit d : digits) {
        if (d >= base)
            throw MalformedInputError("digit " + std::to_string(d) + " out of range for base " +
                                      std::to_string(base));
        s = s * base + d;
    }
    return s;
}

Digit symbol_digit(Symbol s, uint32_t track, const DigitAlphabet& a) {
    if (track >= a.tracks)
        throw MalformedInputError("track index " + std::to_string(track) + " out of range");
    uint32_t shift = 1;
    for (uint32_t i = track + 1; i < a.tracks; ++i) shift *= a.base;
    return (s / shift) % a.base;
}

std::vector<Digit> unpack_symbol(Symbol s, const DigitAlphabet& a) {
    std::vector<Digit> digits(a.tracks);
    for (uint32_t tr = a.tracks; tr-- > 0;) {
        digits[tr] = s % a.base;
        s /= a.base;
    }
    return digits;
}

std::string TrackWord::render() const {
    if (symbols.empty()) return "ε";
    if (alphabet.tracks == 1 && alphabet.base <= 10) {
        std::string out;
        for (Symbol s : symbols) out += static_cast<char>('0' + s);
        return out;
    }
    std::string out;
    for (Symbol s : symbols) {
        out += '[';
        auto digits = unpack_symbol(s, alphabet);
        for (size_t i = 0; i < digits.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(digits[i]);
        }
        out += ']';
    }
    return out;
}

std::vector<Digit> encode_base_k(uint64_t n, uint32_t base) {
    if (base < 2) throw MalformedInputError("base must be at least 2");
    std::vector<Digit> digits;
    while (n > 0) {
        digits.push_back(static_cast<Digit>(n % base));
        n /= base;
    }
    std::reverse(digits.begin(), digits.end());
    return digits;
}

uint64_t decode_base_k(std::span<const Digit> digits, uint32_t base) {
    if (base < 2) throw MalformedInputError("base must be at least 2");
    uint64_t n = 0;
    for (Digit d : digits) {
        if (d >= base)
            throw MalformedInputError("digit " + std::to_string(d) + " out of range for base " +
                                      std::to_string(base));
        if (n > (std::numeric_limits<uint64_t>::max() - d) / base)
            throw MalformedInputError("digit word decodes to a value beyond 64 bits");
        n = n * base + d;
    }
    return n;
}

TrackWord encode_tuple(std::span<const uint64_t> values, uint32_t base) {
    if (values.empty()) throw MalformedInputError("cannot encode an empty tuple");
    std::vector<std::vector<Digit>> per_track;
    size_t width = 0;
    for (uint64_t v : values) {
        per_track.push_back(encode_base_k(v, base));
        width = std::max(width, per_track.back().size());
    }
    TrackWord w;
    w.alphabet = {base, static_cast<uint32_t>(values.size())};
    w.symbols.reserve(width);
    std::vector<Digit> column(values.size());
    for (size_t pos = 0; pos < width; ++pos) {
        for (size_t tr = 0; tr < per_track.size(); ++tr) {
            const auto& digits = per_track[tr];
            size_t pad = width - digits.size();
            column[tr] = pos < pad ? 0 : digits[pos - pad];
        }
        w.symbols.push_back(pack_symbol(column, base));
    }
    return w;
}

std::vector<Digit> project_track(const TrackWord& w, uint32_t track) {
    if (track == 0 || track > w.alphabet.tracks)
        throw MalformedInputError("track index " + std::to_string(track) +
                                  " out of range (tracks are numbered from 1)");
    std::vector<Digit> digits;
    digits.reserve(w.size());
    for (Symbol s : w.symbols) digits.push_back(symbol_digit(s, track - 1, w.alphabet));
    return digits;
}

std::vector<uint64_t> decode_tuple(const TrackWord& w) {
    std::vector<uint64_t> values;
    values.reserve(w.alphabet.tracks);
    for (uint32_t tr = 1; tr <= w.alphabet.tracks; ++tr)
        values.push_back(decode_base_k(project_track(w, tr), w.alphabet.base));
    return values;
}

std::string render_digits(std::span<const Digit> digits, uint32_t base) {
    TrackWord w;
    w.alphabet = {base, 1};
    w.symbols.assign(digits.begin(), digits.end());
    return w.render();
}

} // namespace ksync
