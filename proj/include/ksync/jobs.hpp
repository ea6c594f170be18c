// jobs.hpp -- command implementations behind the CLI
//
// Each run_* function performs one job against explicit output streams and
// returns a process exit code: 0 success, 1 verification failure, 2 malformed
// input or domain error, 3 cap exceeded. The CLI binary only parses flags and
// delegates here, which keeps every command drivable from tests.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "ksync/automata.hpp"
#include "ksync/synchro.hpp"

namespace ksync {

enum class Analysis { Complexity, Appearance, Powers, Primitive, BlockCount };

// Accepts the CLI spellings: complexity, appearance, powers, primitive,
// blockcount. Throws MalformedInputError otherwise.
Analysis parse_analysis(const std::string& name);

// A sequence DFAO plus where it came from. Built-in names resolve to the
// bundled sequences (with a closed-form reference generator); anything else
// is treated as an automaton file path.
struct SequenceSource {
    Dfao dfao;
    std::string label;
    std::function<uint32_t(uint64_t)> reference; // null for file sources
};

SequenceSource load_sequence(const std::string& name_or_path);

struct JobSpec {
    std::string sequence;             // built-in name or DFAO file path
    std::string analysis;             // build only
    std::string in_path;              // eval: automaton file
    std::string out_path;             // build artifact; diagram output ("" = stdout)
    std::string dot_path;             // optional DOT rendering
    std::string ref_sequence;         // verify: reference overriding the built-in generator
    uint64_t n = 0;                   // eval point
    std::optional<uint64_t> range_max; // eval: tabulate 0..range_max instead
    uint64_t n_max = 256;             // diagram/verify bound
    std::optional<uint32_t> base;     // expected numeration base, checked when given
    SyncBuildLimits limits;
};

int run_build(const JobSpec& spec, std::ostream& out, std::ostream& err);
int run_eval(const JobSpec& spec, std::ostream& out, std::ostream& err);
int run_diagram(const JobSpec& spec, std::ostream& out, std::ostream& err);
int run_verify(const JobSpec& spec, std::ostream& out, std::ostream& err);

} // namespace ksync
