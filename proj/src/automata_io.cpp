// automata_io.cpp -- text serialization and GraphViz export
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ksync/automata.hpp"

namespace ksync {

namespace {

[[noreturn]] void bad(size_t lineno, const std::string& msg) {
    throw MalformedInputError("line " + std::to_string(lineno) + ": " + msg);
}

// Parses "[d1,d2,...]" into a packed symbol.
Symbol parse_symbol(const std::string& tok, const DigitAlphabet& a, size_t lineno) {
    if (tok.size() < 2 || tok.front() != '[' || tok.back() != ']')
        bad(lineno, "expected a bracketed digit tuple, got '" + tok + "'");
    std::vector<Digit> digits;
    std::string body = tok.substr(1, tok.size() - 2);
    std::stringstream ss(body);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        if (piece.empty()) bad(lineno, "empty digit in tuple '" + tok + "'");
        size_t used = 0;
        unsigned long d = 0;
        try {
            d = std::stoul(piece, &used);
        } catch (const std::exception&) {
            bad(lineno, "bad digit '" + piece + "'");
        }
        if (used != piece.size()) bad(lineno, "bad digit '" + piece + "'");
        digits.push_back(static_cast<Digit>(d));
    }
    if (digits.size() != a.tracks)
        bad(lineno, "tuple '" + tok + "' has " + std::to_string(digits.size()) +
                        " digits, expected " + std::to_string(a.tracks));
    for (Digit d : digits)
        if (d >= a.base) bad(lineno, "digit out of range in '" + tok + "'");
    return pack_symbol(digits, a.base);
}

uint64_t parse_uint(const std::string& tok, size_t lineno, const char* what) {
    size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(tok, &used);
    } catch (const std::exception&) {
        bad(lineno, std::string("bad ") + what + " '" + tok + "'");
    }
    if (used != tok.size()) bad(lineno, std::string("bad ") + what + " '" + tok + "'");
    return v;
}

} // namespace

ParsedAutomaton load_automaton(std::istream& in) {
    ParsedAutomaton result;
    Dfa& a = result.dfa;
    bool have_base = false, have_states = false, have_accepting = false;
    size_t nstates = 0;
    std::vector<int64_t> table;
    std::vector<int64_t> outputs;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) {
            std::string c = line.substr(h + 1);
            if (!c.empty() && c.front() == ' ') c.erase(0, 1);
            result.comments.push_back(std::move(c));
            line = line.substr(0, h);
        }
        std::stringstream ss(line);
        std::vector<std::string> tok;
        std::string t;
        while (ss >> t) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok[0] == "base") {
            if (have_base) bad(lineno, "duplicate base line");
            if (tok.size() != 4 || tok[2] != "tracks") bad(lineno, "expected 'base K tracks T'");
            a.alphabet.base = static_cast<uint32_t>(parse_uint(tok[1], lineno, "base"));
            a.alphabet.tracks = static_cast<uint32_t>(parse_uint(tok[3], lineno, "track count"));
            if (a.alphabet.base < 2) bad(lineno, "base must be at least 2");
            if (a.alphabet.tracks < 1) bad(lineno, "track count must be at least 1");
            have_base = true;
        } else if (tok[0] == "states") {
            if (!have_base) bad(lineno, "states line before base line");
            if (have_states) bad(lineno, "duplicate states line");
            if (tok.size() != 4 || tok[2] != "initial") bad(lineno, "expected 'states N initial Q'");
            nstates = parse_uint(tok[1], lineno, "state count");
            if (nstates == 0) bad(lineno, "automaton needs at least one state");
            a.initial = static_cast<State>(parse_uint(tok[3], lineno, "initial state"));
            if (a.initial >= nstates) bad(lineno, "initial state out of range");
            table.assign(nstates * size_t{a.alphabet.symbol_count()}, -1);
            outputs.assign(nstates, -1);
            a.accepting.assign(nstates, 0);
            have_states = true;
        } else if (tok[0] == "accepting") {
            if (!have_states) bad(lineno, "accepting line before states line");
            if (have_accepting) bad(lineno, "duplicate accepting line");
            for (size_t i = 1; i < tok.size(); ++i) {
                uint64_t q = parse_uint(tok[i], lineno, "state");
                if (q >= nstates) bad(lineno, "accepting state out of range");
                a.accepting[q] = 1;
            }
            have_accepting = true;
        } else if (tok[0] == "vars") {
            if (result.vars) bad(lineno, "duplicate vars line");
            result.vars.emplace(tok.begin() + 1, tok.end());
        } else if (tok[0] == "output") {
            if (!have_states) bad(lineno, "output line before states line");
            if (tok.size() != 3) bad(lineno, "expected 'output Q V'");
            uint64_t q = parse_uint(tok[1], lineno, "state");
            if (q >= nstates) bad(lineno, "output state out of range");
            if (outputs[q] >= 0) bad(lineno, "duplicate output for state " + tok[1]);
            outputs[q] = static_cast<int64_t>(parse_uint(tok[2], lineno, "output value"));
        } else {
            if (!have_states) bad(lineno, "transition before states line");
            if (tok.size() != 3) bad(lineno, "expected 'Q [digits] Q''");
            uint64_t q = parse_uint(tok[0], lineno, "state");
            uint64_t r = parse_uint(tok[2], lineno, "state");
            if (q >= nstates || r >= nstates) bad(lineno, "transition state out of range");
            Symbol s = parse_symbol(tok[1], a.alphabet, lineno);
            int64_t& cell = table[q * a.alphabet.symbol_count() + s];
            if (cell >= 0) bad(lineno, "duplicate transition for state " + tok[0] + " on " + tok[1]);
            cell = static_cast<int64_t>(r);
        }
    }
    if (!have_base) throw MalformedInputError("missing base line");
    if (!have_states) throw MalformedInputError("missing states line");
    a.transitions.resize(table.size());
    for (size_t i = 0; i < table.size(); ++i) {
        if (table[i] < 0)
            throw MalformedInputError("state " + std::to_string(i / a.alphabet.symbol_count()) +
                                      " is missing a transition; automata must be complete");
        a.transitions[i] = static_cast<State>(table[i]);
    }
    bool any_output = false, all_output = true;
    for (int64_t v : outputs) {
        if (v >= 0) any_output = true;
        if (v < 0) all_output = false;
    }
    if (any_output) {
        if (!all_output)
            throw MalformedInputError("output map does not cover every state");
        result.outputs.emplace();
        for (int64_t v : outputs) result.outputs->push_back(static_cast<uint32_t>(v));
    }
    if (result.vars && result.vars->size() != a.alphabet.tracks)
        throw MalformedInputError("vars line names " + std::to_string(result.vars->size()) +
                                  " variables for " + std::to_string(a.alphabet.tracks) +
                                  " tracks");
    return result;
}

ParsedAutomaton load_automaton_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInputError("cannot open '" + path + "'");
    try {
        return load_automaton(in);
    } catch (const MalformedInputError& e) {
        throw MalformedInputError(path + ": " + e.what());
    }
}

void save_automaton(std::ostream& out, const Dfa& a, const std::vector<std::string>* vars,
                    const std::vector<uint32_t>* outputs, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << "\n";
    out << "base " << a.alphabet.base << " tracks " << a.alphabet.tracks << "\n";
    out << "states " << a.state_count() << " initial " << a.initial << "\n";
    out << "accepting";
    for (size_t q = 0; q < a.state_count(); ++q)
        if (a.accepting[q]) out << ' ' << q;
    out << "\n";
    if (vars) {
        out << "vars";
        for (const auto& v : *vars) out << ' ' << v;
        out << "\n";
    }
    const uint32_t nsym = a.alphabet.symbol_count();
    for (size_t q = 0; q < a.state_count(); ++q)
        for (Symbol s = 0; s < nsym; ++s) {
            out << q << " [";
            auto digits = unpack_symbol(s, a.alphabet);
            for (size_t i = 0; i < digits.size(); ++i) {
                if (i) out << ',';
                out << digits[i];
            }
            out << "] " << a.next(static_cast<State>(q), s) << "\n";
        }
    if (outputs)
        for (size_t q = 0; q < a.state_count(); ++q) out << "output " << q << ' ' << (*outputs)[q] << "\n";
}

void save_automaton_file(const std::string& path, const Dfa& a, const std::vector<std::string>* vars,
                         const std::vector<uint32_t>* outputs,
                         const std::vector<std::string>& comments) {
    std::ofstream out(path);
    if (!out) throw MalformedInputError("cannot open '" + path + "' for writing");
    save_automaton(out, a, vars, outputs, comments);
    if (!out) throw MalformedInputError("failed writing '" + path + "'");
}

std::string to_dot(const Dfa& a, const std::vector<uint32_t>* outputs) {
    const uint32_t nsym = a.alphabet.symbol_count();
    // A state is dead when no accepting state is reachable from it; acceptor
    // rendering drops them to keep diagrams readable. DFAOs keep every state.
    std::vector<uint8_t> live(a.state_count(), outputs ? 1 : 0);
    if (!outputs) {
        bool changed = true;
        for (size_t q = 0; q < a.state_count(); ++q) live[q] = a.accepting[q];
        while (changed) {
            changed = false;
            for (size_t q = 0; q < a.state_count(); ++q) {
                if (live[q]) continue;
                for (Symbol s = 0; s < nsym; ++s)
                    if (live[a.next(static_cast<State>(q), s)]) {
                        live[q] = 1;
                        changed = true;
                        break;
                    }
            }
        }
    }
    std::ostringstream out;
    out << "digraph automaton {\n  rankdir=LR;\n  __start [shape=point];\n";
    for (size_t q = 0; q < a.state_count(); ++q) {
        if (!live[q]) continue;
        out << "  q" << q << " [shape=" << (a.accepting[q] && !outputs ? "doublecircle" : "circle")
            << " label=\"" << q;
        if (outputs) out << "/" << (*outputs)[q];
        out << "\"];\n";
    }
    if (live[a.initial]) out << "  __start -> q" << a.initial << ";\n";
    for (size_t q = 0; q < a.state_count(); ++q) {
        if (!live[q]) continue;
        // Merge parallel edges into one label.
        std::vector<std::pair<State, std::string>> edges;
        for (Symbol s = 0; s < nsym; ++s) {
            State t = a.next(static_cast<State>(q), s);
            if (!live[t]) continue;
            std::string lab = "[";
            auto digits = unpack_symbol(s, a.alphabet);
            for (size_t i = 0; i < digits.size(); ++i) {
                if (i) lab += ',';
                lab += std::to_string(digits[i]);
            }
            lab += ']';
            bool merged = false;
            for (auto& [tt, ll] : edges)
                if (tt == t) {
                    ll += " " + lab;
                    merged = true;
                    break;
                }
            if (!merged) edges.emplace_back(t, lab);
        }
        for (auto& [t, lab] : edges)
            out << "  q" << q << " -> q" << t << " [label=\"" << lab << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace ksync
