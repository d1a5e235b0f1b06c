#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fese/protocol/client.hpp"
#include "fese/protocol/params.hpp"
#include "fese/random.hpp"

namespace fese {

struct ExperimentConfig {
  SchemeParams params;
  std::size_t enrolled = 500;
  std::size_t genuine_queries = 1000;
  std::size_t impostor_queries = 10000;
  double genuine_flip = 0.01;  ///< per-bit flip probability of genuine queries
  std::size_t threads = 1;
  Seed seed = seed_from_u64(0);
  std::string trial_log;  ///< CSV path, empty for none

  /// Accepts every SchemeParams key plus enrolled, genuine_queries,
  /// impostor_queries, genuine_flip, threads, seed and trial_log. Throws
  /// kConfig otherwise.
  void set(std::string_view key, std::string_view value);
  void validate() const;
};

struct PhaseCost {
  std::uint64_t requests = 0;
  OpCounters ops;
  double seconds = 0;

  double per_request(std::uint64_t total) const {
    return requests == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(requests);
  }
};

struct TrialRecord {
  bool genuine = false;
  std::size_t trial = 0;
  std::size_t user = 0;            ///< enrolled index of the target, genuine only
  std::size_t distance = 0;        ///< to the target (genuine) or nearest enrolled (impostor)
  bool retrieved = false;          ///< genuine: target in Phi; impostor: Phi non-empty
  std::size_t candidates = 0;      ///< |Phi| before verification
  std::size_t verified = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::size_t enrolled = 0;
  std::size_t rejected_enrolments = 0;

  std::size_t genuine_trials = 0;
  std::size_t genuine_retrieved = 0;
  std::size_t genuine_verified = 0;     ///< target among verified candidates
  std::size_t genuine_close = 0;        ///< trials with distance <= lambda_min
  std::size_t genuine_close_missed = 0;
  std::size_t impostor_trials = 0;
  std::size_t impostor_far = 0;         ///< nearest enrolled farther than lambda_max
  std::size_t impostor_far_captured = 0;
  std::size_t impostor_nonempty = 0;
  std::size_t false_verifications = 0; ///< verified candidates beyond lambda_min (must be 0)

  double genuine_candidates_mean = 0;
  std::size_t genuine_candidates_max = 0;
  double impostor_candidates_mean = 0;
  std::size_t impostor_candidates_max = 0;

  double completeness_analytic = 0;     ///< (1 - flip)^{t*mu} for full intersection
  double soundness_bound = 0;           ///< (eps2 + (1 - eps2)/m)^{|Hc|}
  double eps1 = 0;
  double eps2 = 0;

  double keygen_seconds = 0;
  PhaseCost enrol;
  PhaseCost genuine;
  PhaseCost impostor;
  PhaseCost verification;

  std::vector<TrialRecord> trials;

  double genuine_retrieval_rate() const;
  double eta_c() const;  ///< missed fraction among genuine trials within lambda_min
  double eta_s() const;  ///< captured fraction among impostor trials beyond lambda_max

  /// key = value lines.
  std::string to_text() const;
  /// kind,trial,user,distance,retrieved,candidates,verified
  std::string trial_csv() const;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

struct BenchConfig {
  SchemeParams params;
  std::size_t enrolled = 100;
  std::size_t repetitions = 50;
  Seed seed = seed_from_u64(0);
};

/// Mean wall-clock cost of each phase of a request, in microseconds, as
/// key = value lines.
std::string run_bench(const BenchConfig& config);

}  // namespace fese
