// Acceptance checks for the synchronized-counting pipeline. Each numbered
// check prints exactly one PASS/FAIL line; the exit code is the number of
// failures. Every expected value is computed by brute force over sequence
// prefixes, never by the automaton path under test.
#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ksync/oracles.hpp"
#include "ksync/predicates.hpp"
#include "ksync/sequences.hpp"
#include "ksync/synchro.hpp"

using namespace ksync;

namespace {

int failures = 0;

void criterion(int idx, const char* title, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %2d: %s%s%s\n", ok ? "PASS" : "FAIL", idx, title,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool windows_equal(const std::vector<uint32_t>& z, size_t a, size_t b, size_t len) {
    for (size_t q = 0; q < len; ++q)
        if (z[a + q] != z[b + q]) return false;
    return true;
}

} // namespace

int main() {
    criterion(1, "block-count automaton reproduces the novel-run table for lengths 0..14",
              [](std::string& detail) {
                  auto start = std::chrono::steady_clock::now();
                  Dfao tm = thue_morse_dfao();
                  BlockCountAutomaton bc = build_block_count_dfao(tm, pred_novel(tm));
                  double dt = seconds_since(start);
                  const uint32_t table[] = {1, 1, 2, 1, 3, 1, 5, 3, 3, 1, 5, 5, 5, 3, 3};
                  for (uint64_t n = 0; n <= 14; ++n)
                      if (dfao_output(bc.dfao, n) != table[n]) {
                          detail = "wrong count at n=" + std::to_string(n);
                          return false;
                      }
                  if (dt >= 300.0) {
                      detail = "build took " + std::to_string(dt) + "s";
                      return false;
                  }
                  detail = "built in " + std::to_string(dt) + "s";
                  return true;
              });

    criterion(2, "factor-count graphs match brute force on three sequences",
              [](std::string& detail) {
                  struct Case {
                      const char* name;
                      Dfao (*make)();
                      uint32_t (*rule)(uint64_t);
                      uint64_t n_max;
                  };
                  const Case cases[] = {
                      {"thue_morse", thue_morse_dfao, thue_morse_at, 512},
                      {"paperfolding", paperfolding_dfao, paperfolding_at, 256},
                      {"period_doubling", period_doubling_dfao, period_doubling_at, 256},
                  };
                  for (const Case& c : cases) {
                      SyncFunction rho = build_rho_sync(c.make());
                      PrefixView view = PrefixView::from_generator(c.rule);
                      for (uint64_t n = 0; n <= c.n_max; ++n)
                          if (eval_sync(rho, n) != count_naive(view, n, FactorKind::Factors)) {
                              detail = std::string(c.name) + " wrong at n=" + std::to_string(n);
                              return false;
                          }
                  }
                  return true;
              });

    criterion(3, "novel runs stay within the growth bound, peaking at 5 first at n=6",
              [](std::string& detail) {
                  Dfao tm = thue_morse_dfao();
                  SyncFunction rho = build_rho_sync(tm);
                  PrefixView view = PrefixView::from_generator(thue_morse_at);
                  uint32_t max_blocks = 0;
                  uint64_t first_max = 0;
                  uint64_t prev_rho = eval_sync(rho, 0);
                  for (uint64_t n = 1; n <= 512; ++n) {
                      uint32_t blocks = novel_set_naive(view, n).block_count;
                      uint64_t cur_rho = eval_sync(rho, n);
                      if (blocks > cur_rho - prev_rho + 1) {
                          detail = "bound broken at n=" + std::to_string(n);
                          return false;
                      }
                      if (blocks > max_blocks) {
                          max_blocks = blocks;
                          first_max = n;
                      }
                      prev_rho = cur_rho;
                  }
                  if (max_blocks != 5 || first_max != 6) {
                      detail = "max " + std::to_string(max_blocks) + " first at n=" +
                               std::to_string(first_max);
                      return false;
                  }
                  return true;
              });

    criterion(4, "novel positions accumulate monotonically on all four built-ins",
              [](std::string& detail) {
                  for (const std::string& name : builtin_sequence_names()) {
                      PrefixView view = PrefixView::from_generator(*builtin_generator(name));
                      NovelSet prev = novel_set_naive(view, 0);
                      for (uint64_t n = 1; n <= 257; ++n) {
                          NovelSet cur = novel_set_naive(view, n);
                          for (uint64_t pos : prev.positions) {
                              if (pos > 256) break;
                              if (!std::binary_search(cur.positions.begin(), cur.positions.end(),
                                                      pos)) {
                                  detail = name + ": position " + std::to_string(pos) +
                                           " left the set at n=" + std::to_string(n);
                                  return false;
                              }
                          }
                          prev = std::move(cur);
                      }
                  }
                  return true;
              });

    criterion(5, "concatenated binary numerals force at least n-2 novel runs",
              [](std::string& detail) {
                  PrefixView view = PrefixView::from_word(binary_numerals_word(size_t{1} << 21));
                  for (uint64_t n = 5; n <= 12; ++n) {
                      uint32_t blocks = novel_set_naive(view, n).block_count;
                      if (blocks + 2 < n) {
                          detail = "only " + std::to_string(blocks) + " runs at n=" +
                                   std::to_string(n);
                          return false;
                      }
                  }
                  return true;
              });

    criterion(6, "evaluation at n=10^9 is sub-second and edge visits grow linearly",
              [](std::string& detail) {
                  SyncFunction rho = build_rho_sync(thue_morse_dfao());
                  auto start = std::chrono::steady_clock::now();
                  uint64_t fast = eval_sync(rho, 1000000000);
                  double dt = seconds_since(start);
                  if (dt >= 1.0) {
                      detail = "evaluation took " + std::to_string(dt) + "s";
                      return false;
                  }
                  if (fast != eval_by_intersection(rho, 1000000000)) {
                      detail = "fast and slow routes disagree";
                      return false;
                  }
                  double min_rate = 1e300, max_rate = 0;
                  for (uint32_t p = 10; p <= 30; ++p) {
                      EvalStats stats;
                      eval_sync(rho, uint64_t{1} << p, &stats);
                      double rate = static_cast<double>(stats.edges_visited) / p;
                      min_rate = std::min(min_rate, rate);
                      max_rate = std::max(max_rate, rate);
                  }
                  if (max_rate > 2.0 * min_rate) {
                      detail = "edge rate varies from " + std::to_string(min_rate) + " to " +
                               std::to_string(max_rate) + " per digit";
                      return false;
                  }
                  detail = "eval " + std::to_string(dt) + "s, " +
                           std::to_string(min_rate).substr(0, 5) + ".." +
                           std::to_string(max_rate).substr(0, 5) + " edges/digit";
                  return true;
              });

    criterion(7, "power and primitive counts match brute force and sum to the factor count",
              [](std::string& detail) {
                  Dfao tm = thue_morse_dfao();
                  SyncFunction rho = build_rho_sync(tm);
                  SyncFunction powers = build_power_count_sync(tm);
                  SyncFunction prim = build_primitive_count_sync(rho, powers);
                  PrefixView view = PrefixView::from_generator(thue_morse_at);
                  for (uint64_t n = 0; n <= 256; ++n) {
                      uint64_t pw = eval_sync(powers, n);
                      uint64_t pr = eval_sync(prim, n);
                      if (pw != count_naive(view, n, FactorKind::Powers) ||
                          pr != count_naive(view, n, FactorKind::Primitive)) {
                          detail = "count wrong at n=" + std::to_string(n);
                          return false;
                      }
                      if (pw + pr != eval_sync(rho, n)) {
                          detail = "sum wrong at n=" + std::to_string(n);
                          return false;
                      }
                  }
                  return true;
              });

    criterion(8, "appearance matches brute force and stays within the linear envelope",
              [](std::string& detail) {
                  SyncFunction alpha = build_appearance_sync(thue_morse_dfao());
                  PrefixView view = PrefixView::from_generator(thue_morse_at);
                  for (uint64_t n = 0; n <= 256; ++n) {
                      uint64_t a = eval_sync(alpha, n);
                      if (a != appearance_naive(view, n)) {
                          detail = "value wrong at n=" + std::to_string(n);
                          return false;
                      }
                      if (a > 16 * n + 16) {
                          detail = "envelope broken at n=" + std::to_string(n);
                          return false;
                      }
                  }
                  return true;
              });

    criterion(9, "morphism iterates witness the tightness of the power-run gap",
              [](std::string& detail) {
                  for (uint32_t i = 0; i <= 4; ++i) {
                      std::vector<uint32_t> z = power_gap_word(i);
                      const size_t len = size_t{12} << i;
                      if (z.size() != len) {
                          detail = "wrong length at i=" + std::to_string(i);
                          return false;
                      }
                      for (uint64_t n = 2; n <= len; ++n)
                          if (!power_gap_check(z, n)) {
                              detail = "gap property broken at i=" + std::to_string(i) +
                                       ", n=" + std::to_string(n);
                              return false;
                          }
                      // Squares of length 3*2^(i+1) start at every one of the
                      // first 3*2^i positions ...
                      const size_t L = size_t{3} << (i + 1);
                      for (size_t p = 0; p < (size_t{3} << i); ++p)
                          if (!windows_equal(z, p, p + L / 2, L / 2)) {
                              detail = "missing square at i=" + std::to_string(i) +
                                       ", p=" + std::to_string(p);
                              return false;
                          }
                      // ... and cubes of that length end in the last 2^i + 1
                      // positions.
                      for (size_t e = len - (size_t{1} << i) - 1; e < len; ++e) {
                          size_t p = e + 1 - L;
                          if (!windows_equal(z, p, p + L / 3, L / 3) ||
                              !windows_equal(z, p + L / 3, p + 2 * (L / 3), L / 3)) {
                              detail = "missing cube at i=" + std::to_string(i) +
                                       ", end=" + std::to_string(e);
                              return false;
                          }
                      }
                  }
                  return true;
              });

    criterion(10, "powers-of-two word has exactly r+2 unbordered factors of length 2^r+1",
              [](std::string& detail) {
                  PrefixView view = PrefixView::from_generator(powers_of_two_at);
                  for (uint32_t r = 2; r <= 9; ++r) {
                      uint64_t n = (uint64_t{1} << r) + 1;
                      uint64_t got = count_naive(view, n, FactorKind::Unbordered);
                      if (got != r + 2) {
                          detail = "got " + std::to_string(got) + " at r=" + std::to_string(r);
                          return false;
                      }
                  }
                  return true;
              });

    criterion(11, "novelty count chain reaches its fixed point within 7 monotone rounds",
              [](std::string& detail) {
                  Dfao tm = thue_morse_dfao();
                  SyncBuildInfo info;
                  // The builder verifies after every round that the chain only
                  // grew; a shrink raises an error and fails this check.
                  build_count_sync(pred_novel(tm), {}, &info);
                  if (info.iterations > 7) {
                      detail = "took " + std::to_string(info.iterations) + " rounds";
                      return false;
                  }
                  detail = std::to_string(info.iterations) + " rounds, monotone throughout";
                  return true;
              });

    if (failures == 0) {
        std::printf("acceptance: all 11 checks passed\n");
    } else {
        std::printf("acceptance: %d check(s) failed\n", failures);
    }
    return failures;
}
