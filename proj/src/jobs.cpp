#include "ksync/jobs.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "ksync/errors.hpp"
#include "ksync/numeration.hpp"
#include "ksync/oracles.hpp"
#include "ksync/predicates.hpp"
#include "ksync/sequences.hpp"

namespace ksync {

namespace {

// Shared exception-to-exit-code policy: 2 for bad input or out-of-domain
// queries, 3 for exceeded caps, 1 for anything else that went wrong.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const CapExceededError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const MalformedInputError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

std::string digits_base_k(uint64_t n, uint32_t base) {
    auto ds = encode_base_k(n, base);
    if (ds.empty()) return "0";
    std::string s;
    s.reserve(ds.size());
    for (auto d : ds) s += d < 10 ? char('0' + d) : char('a' + (d - 10));
    return s;
}

void check_expected_base(const JobSpec& spec, uint32_t actual) {
    if (spec.base && *spec.base != actual)
        throw MalformedInputError("numeration base mismatch: expected base " +
                                  std::to_string(*spec.base) + ", automaton uses base " +
                                  std::to_string(actual));
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw MalformedInputError("cannot open for writing: " + path);
    out << text;
    if (!out) throw MalformedInputError("write failed: " + path);
}

std::string analysis_name(Analysis a) {
    switch (a) {
        case Analysis::Complexity: return "complexity";
        case Analysis::Appearance: return "appearance";
        case Analysis::Powers: return "powers";
        case Analysis::Primitive: return "primitive";
        case Analysis::BlockCount: return "blockcount";
    }
    return "?";
}

} // namespace

Analysis parse_analysis(const std::string& name) {
    if (name == "complexity") return Analysis::Complexity;
    if (name == "appearance") return Analysis::Appearance;
    if (name == "powers") return Analysis::Powers;
    if (name == "primitive") return Analysis::Primitive;
    if (name == "blockcount") return Analysis::BlockCount;
    throw MalformedInputError(
        "unknown analysis '" + name +
        "' (expected complexity, appearance, powers, primitive, or blockcount)");
}

SequenceSource load_sequence(const std::string& name_or_path) {
    if (auto d = builtin_dfao(name_or_path)) {
        return SequenceSource{std::move(*d), name_or_path, *builtin_generator(name_or_path)};
    }
    ParsedAutomaton p = load_automaton_file(name_or_path);
    if (!p.outputs)
        throw MalformedInputError("sequence file has no output table (not a sequence automaton): " +
                                  name_or_path);
    Dfao m{std::move(p.dfa), std::move(*p.outputs)};
    validate_sequence_dfao(m);
    std::string label = std::filesystem::path(name_or_path).stem().string();
    if (label.empty()) label = name_or_path;
    return SequenceSource{std::move(m), std::move(label), nullptr};
}

int run_build(const JobSpec& spec, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        if (spec.out_path.empty())
            throw MalformedInputError("build requires an output path (--out)");
        Analysis analysis = parse_analysis(spec.analysis);
        SequenceSource seq = load_sequence(spec.sequence);
        check_expected_base(spec, seq.dfao.dfa.alphabet.base);

        if (analysis == Analysis::BlockCount) {
            Relation novel = pred_novel(seq.dfao, spec.limits.state_cap);
            BlockCountAutomaton bc = build_block_count_dfao(seq.dfao, novel, spec.limits);
            // The chain of run-count layers is explored once per attained
            // count plus the empty round that closes the loop.
            uint32_t iterations = bc.max_blocks + 1;
            std::vector<std::string> vars = {"n"};
            std::vector<std::string> comments = {
                "sequence: " + seq.label,
                "analysis: blockcount",
                "iterations: " + std::to_string(iterations),
                "states: " + std::to_string(bc.dfao.dfa.state_count()),
                "max blocks: " + std::to_string(bc.max_blocks),
            };
            save_automaton_file(spec.out_path, bc.dfao.dfa, &vars, &bc.dfao.outputs, comments);
            if (!spec.dot_path.empty())
                write_text_file(spec.dot_path, to_dot(bc.dfao.dfa, &bc.dfao.outputs));
            out << "analysis: blockcount\n"
                << "states: " << bc.dfao.dfa.state_count() << '\n'
                << "max blocks: " << bc.max_blocks << '\n'
                << "wrote: " << spec.out_path << '\n';
            return 0;
        }

        SyncBuildInfo info;
        SyncFunction f;
        switch (analysis) {
            case Analysis::Complexity: f = build_rho_sync(seq.dfao, spec.limits, &info); break;
            case Analysis::Appearance: f = build_appearance_sync(seq.dfao, spec.limits, &info); break;
            case Analysis::Powers: f = build_power_count_sync(seq.dfao, spec.limits, &info); break;
            case Analysis::Primitive: f = build_primitive_count_sync(seq.dfao, spec.limits, &info); break;
            case Analysis::BlockCount: break; // handled above
        }
        std::vector<std::string> comments = {
            "sequence: " + seq.label,
            "analysis: " + analysis_name(analysis),
            "iterations: " + std::to_string(info.iterations),
            "states: " + std::to_string(f.graph.state_count()),
        };
        save_sync_function_file(spec.out_path, f, comments);
        if (!spec.dot_path.empty()) write_text_file(spec.dot_path, to_dot(f.graph));
        out << "analysis: " << analysis_name(analysis) << '\n'
            << "iterations: " << info.iterations << '\n'
            << "states: " << f.graph.state_count() << '\n'
            << "wrote: " << spec.out_path << '\n';
        return 0;
    });
}

int run_eval(const JobSpec& spec, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        if (spec.in_path.empty()) throw MalformedInputError("eval requires an automaton file");
        ParsedAutomaton p = load_automaton_file(spec.in_path);
        check_expected_base(spec, p.dfa.alphabet.base);
        uint32_t base = p.dfa.alphabet.base;

        std::function<uint64_t(uint64_t)> value_at;
        if (p.outputs) {
            if (p.dfa.alphabet.tracks != 1)
                throw MalformedInputError("output automaton must have one track, found " +
                                          std::to_string(p.dfa.alphabet.tracks));
            Dfao m{std::move(p.dfa), std::move(*p.outputs)};
            value_at = [m = std::move(m)](uint64_t n) { return uint64_t{dfao_output(m, n)}; };
        } else {
            SyncFunction f = load_sync_function_file(spec.in_path);
            value_at = [f = std::move(f)](uint64_t n) { return eval_sync(f, n); };
        }

        if (spec.range_max) {
            out << "n\tvalue\n";
            for (uint64_t n = 0; n <= *spec.range_max; ++n)
                out << n << '\t' << value_at(n) << '\n';
            return 0;
        }
        uint64_t v = value_at(spec.n);
        out << v << '\n'
            << "base-" << base << ": " << digits_base_k(v, base) << '\n';
        return 0;
    });
}

int run_diagram(const JobSpec& spec, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        if (spec.n_max == 0) throw MalformedInputError("diagram needs --nmax at least 1");
        SequenceSource seq = load_sequence(spec.sequence);
        check_expected_base(spec, seq.dfao.dfa.alphabet.base);
        PrefixView view = PrefixView::from_dfao(seq.dfao);

        std::vector<NovelSet> rows;
        rows.reserve(spec.n_max);
        uint64_t width = 1;
        for (uint64_t n = 1; n <= spec.n_max; ++n) {
            rows.push_back(novel_set_naive(view, n));
            if (!rows.back().positions.empty())
                width = std::max(width, rows.back().positions.back() + 1);
        }

        std::ostringstream text;
        int label_width = static_cast<int>(std::to_string(spec.n_max).size());
        for (const NovelSet& row : rows) {
            std::string cells(width, '.');
            for (uint64_t pos : row.positions) cells[pos] = '#';
            text << "n=";
            text.width(label_width);
            text << row.n;
            text << ' ' << cells << "  " << row.block_count
                 << (row.block_count == 1 ? " block" : " blocks");
            if (!row.positions.empty()) {
                text << ": ";
                uint64_t start = row.positions[0], prev = row.positions[0];
                bool first = true;
                auto flush = [&](uint64_t s, uint64_t e) {
                    if (!first) text << '|';
                    first = false;
                    text << s << '-' << e;
                };
                for (size_t idx = 1; idx < row.positions.size(); ++idx) {
                    uint64_t pos = row.positions[idx];
                    if (pos != prev + 1) {
                        flush(start, prev);
                        start = pos;
                    }
                    prev = pos;
                }
                flush(start, prev);
            }
            text << '\n';
        }
        if (spec.out_path.empty()) {
            out << text.str();
        } else {
            write_text_file(spec.out_path, text.str());
            out << "wrote: " << spec.out_path << '\n';
        }
        return 0;
    });
}

namespace {

// One verification step: prints ok/FAIL and accumulates the overall verdict.
class Checklist {
public:
    Checklist(std::ostream& out) : out_(out) {}

    void check(const std::string& label, bool ok, const std::string& detail = "") {
        if (ok) {
            out_ << "ok: " << label << '\n';
        } else {
            out_ << "FAIL: " << label;
            if (!detail.empty()) out_ << " (" << detail << ')';
            out_ << '\n';
            ++failures_;
        }
    }

    size_t failures() const { return failures_; }

private:
    std::ostream& out_;
    size_t failures_ = 0;
};

} // namespace

int run_verify(const JobSpec& spec, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        SequenceSource seq = load_sequence(spec.sequence);
        check_expected_base(spec, seq.dfao.dfa.alphabet.base);
        const uint64_t n_max = spec.n_max;
        Checklist list(out);

        // Letters against an independent reference, when one is available:
        // built-ins carry their arithmetic rule, files can name one via --ref.
        std::function<uint32_t(uint64_t)> reference = seq.reference;
        if (!spec.ref_sequence.empty()) {
            auto g = builtin_generator(spec.ref_sequence);
            if (!g)
                throw MalformedInputError("unknown reference sequence: " + spec.ref_sequence);
            reference = *g;
        }
        if (reference) {
            uint64_t bad = UINT64_MAX;
            uint64_t letters = std::max<uint64_t>(4 * (n_max + 1), 1024);
            for (uint64_t i = 0; i < letters; ++i) {
                if (dfao_output(seq.dfao, i) != reference(i)) {
                    bad = i;
                    break;
                }
            }
            list.check("letters match the reference rule",
                       bad == UINT64_MAX, "first mismatch at n=" + std::to_string(bad));
        } else {
            out << "note: no reference rule for '" << seq.label
                << "', letter check skipped (use --ref)\n";
        }

        // Build every artifact once; later checks reuse them.
        SyncBuildInfo rho_info;
        SyncFunction rho = build_rho_sync(seq.dfao, spec.limits, &rho_info);
        SyncFunction alpha = build_appearance_sync(seq.dfao, spec.limits);
        SyncFunction powers = build_power_count_sync(seq.dfao, spec.limits);
        SyncFunction prim = build_primitive_count_sync(rho, powers);
        Relation novel = pred_novel(seq.dfao, spec.limits.state_cap);
        BlockCountAutomaton blocks = build_block_count_dfao(seq.dfao, novel, spec.limits);
        out << "note: built complexity (" << rho.graph.state_count() << " states, "
            << rho_info.iterations << " iterations), appearance ("
            << alpha.graph.state_count() << "), powers (" << powers.graph.state_count()
            << "), primitive (" << prim.graph.state_count() << "), blockcount ("
            << blocks.dfao.dfa.state_count() << " states, max " << blocks.max_blocks
            << " blocks)\n";

        // Each graph pairs every n up to the bound with exactly one value.
        uint64_t graph_bound = std::min<uint64_t>(n_max, 512);
        for (const auto* f : {&rho, &alpha, &powers, &prim}) {
            uint64_t bad = 0;
            bool ok = check_function_graph(*f, graph_bound, &bad);
            list.check("function graph of " + f->name + " is total and single-valued up to " +
                           std::to_string(graph_bound),
                       ok, "offender n=" + std::to_string(bad));
        }

        // Values against the brute-force counts.
        PrefixView view = PrefixView::from_dfao(seq.dfao);
        {
            uint64_t bad = UINT64_MAX;
            std::string what;
            std::vector<uint64_t> rho_vals(n_max + 1), pow_vals(n_max + 1);
            for (uint64_t n = 0; n <= n_max && bad == UINT64_MAX; ++n) {
                rho_vals[n] = eval_sync(rho, n);
                pow_vals[n] = eval_sync(powers, n);
                if (rho_vals[n] != count_naive(view, n, FactorKind::Factors)) {
                    bad = n; what = "complexity";
                } else if (eval_sync(alpha, n) != appearance_naive(view, n)) {
                    bad = n; what = "appearance";
                } else if (pow_vals[n] != count_naive(view, n, FactorKind::Powers)) {
                    bad = n; what = "powers";
                } else if (eval_sync(prim, n) != count_naive(view, n, FactorKind::Primitive)) {
                    bad = n; what = "primitive";
                }
            }
            list.check("evaluations agree with brute-force counts up to " + std::to_string(n_max),
                       bad == UINT64_MAX, what + " wrong at n=" + std::to_string(bad));

            uint64_t bad_add = UINT64_MAX;
            for (uint64_t n = 0; n <= n_max; ++n) {
                if (bad != UINT64_MAX && n >= bad) break; // values beyond bad were not computed
                if (rho_vals[n] != pow_vals[n] + eval_sync(prim, n)) {
                    bad_add = n;
                    break;
                }
            }
            list.check("factor count splits into powers plus primitive",
                       bad_add == UINT64_MAX, "n=" + std::to_string(bad_add));
        }

        // First-occurrence positions only ever accumulate as n grows.
        {
            uint64_t mono_bound = std::min<uint64_t>(n_max, 128);
            uint64_t bad = UINT64_MAX;
            NovelSet prev = novel_set_naive(view, 1);
            for (uint64_t n = 2; n <= mono_bound && bad == UINT64_MAX; ++n) {
                NovelSet cur = novel_set_naive(view, n);
                if (!std::includes(cur.positions.begin(), cur.positions.end(),
                                   prev.positions.begin(), prev.positions.end()))
                    bad = n;
                prev = std::move(cur);
            }
            list.check("novel positions grow monotonically up to " + std::to_string(mono_bound),
                       bad == UINT64_MAX, "first shrink at n=" + std::to_string(bad));
        }

        // Run-count outputs match the oracle and respect the growth bound.
        {
            uint64_t bc_bound = std::min<uint64_t>(n_max, 128);
            uint64_t bad = UINT64_MAX;
            std::string why;
            uint64_t prev_rho = eval_sync(rho, 0);
            for (uint64_t n = 1; n <= bc_bound && bad == UINT64_MAX; ++n) {
                NovelSet s = novel_set_naive(view, n);
                uint32_t got = dfao_output(blocks.dfao, n);
                uint64_t cur_rho = eval_sync(rho, n);
                if (got != s.block_count) {
                    bad = n;
                    why = "automaton says " + std::to_string(got) + ", oracle says " +
                          std::to_string(s.block_count);
                } else if (got > cur_rho - prev_rho + 1) {
                    bad = n;
                    why = "count exceeds growth bound";
                }
                prev_rho = cur_rho;
            }
            list.check("block counts match the oracle and stay within the growth bound up to " +
                           std::to_string(bc_bound),
                       bad == UINT64_MAX, why + " at n=" + std::to_string(bad));
        }

        // Digit-walk evaluation against the independent intersection route.
        {
            std::vector<uint64_t> samples = {0, 1, 2, 3, 5, 13, n_max, n_max + 1};
            for (uint32_t p = 8; p <= 24; p += 4) samples.push_back(uint64_t{1} << p);
            uint64_t bad = UINT64_MAX;
            for (uint64_t n : samples) {
                if (eval_sync(rho, n) != eval_by_intersection(rho, n)) {
                    bad = n;
                    break;
                }
            }
            list.check("digit-walk evaluation matches the intersection route",
                       bad == UINT64_MAX, "n=" + std::to_string(bad));
        }

        // Serialization round trips.
        {
            namespace fs = std::filesystem;
            fs::path dir =
                spec.out_path.empty() ? fs::temp_directory_path() : fs::path(spec.out_path);
            fs::create_directories(dir);
            bool ok = true;
            std::string why;
            for (const auto* f : {&rho, &alpha, &powers, &prim}) {
                fs::path file = dir / ("verify_" + f->name + ".txt");
                save_sync_function_file(file.string(), *f);
                SyncFunction back = load_sync_function_file(file.string());
                if (!equivalent(f->graph, back.graph)) {
                    ok = false;
                    why = f->name + " changed across save/load";
                    break;
                }
                if (back.name != f->name || back.domain_floor != f->domain_floor) {
                    ok = false;
                    why = f->name + " lost its header across save/load";
                    break;
                }
            }
            if (ok) {
                fs::path file = dir / "verify_blockcount.txt";
                std::vector<std::string> vars = {"n"};
                save_automaton_file(file.string(), blocks.dfao.dfa, &vars, &blocks.dfao.outputs);
                ParsedAutomaton back = load_automaton_file(file.string());
                if (!back.outputs) {
                    ok = false;
                    why = "block-count outputs lost across save/load";
                } else {
                    Dfao m{std::move(back.dfa), std::move(*back.outputs)};
                    for (uint64_t n = 0; n <= std::min<uint64_t>(n_max, 128); ++n) {
                        if (dfao_output(m, n) != dfao_output(blocks.dfao, n)) {
                            ok = false;
                            why = "block-count output changed at n=" + std::to_string(n);
                            break;
                        }
                    }
                }
            }
            list.check("artifacts survive a save/load round trip", ok, why);
        }

        // Characteristic sequence of powers of two: a length-(2^r + 1) window
        // has exactly r + 2 distinct unbordered factors.
        if (seq.label == "powers_of_two_char") {
            uint64_t bad = UINT64_MAX;
            for (uint32_t r = 2; r <= 9; ++r) {
                uint64_t n = (uint64_t{1} << r) + 1;
                if (count_naive(view, n, FactorKind::Unbordered) != r + 2) {
                    bad = r;
                    break;
                }
            }
            list.check("unbordered factor counts at lengths 2^r+1 equal r+2",
                       bad == UINT64_MAX, "r=" + std::to_string(bad));
        }

        if (list.failures() == 0) {
            out << "verify: PASS (" << seq.label << ", N=" << n_max << ")\n";
            return 0;
        }
        out << "verify: FAIL (" << list.failures() << " check(s) failed)\n";
        return 1;
    });
}

} // namespace ksync
