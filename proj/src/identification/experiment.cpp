#include "fese/identification/experiment.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "fese/crypto/elgamal.hpp"
#include "fese/error.hpp"
#include "fese/identification/identification.hpp"
#include "fese/pir/pir_client.hpp"
#include "fese/protocol/keygen.hpp"

namespace fese {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t parse_count(std::string_view key, std::string_view value) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  require(ec == std::errc() && ptr == value.data() + value.size(), ErrorCode::kConfig,
          std::string(key) + ": expected a non-negative integer, got \"" + std::string(value) +
              "\"");
  return v;
}

double parse_real(std::string_view key, std::string_view value) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  require(ec == std::errc() && ptr == value.data() + value.size(), ErrorCode::kConfig,
          std::string(key) + ": expected a number, got \"" + std::string(value) + "\"");
  return v;
}

double binomial_tail(std::size_t n, std::size_t k_min, double p) {
  double total = 0;
  for (std::size_t k = k_min; k <= n; ++k) {
    double log_c = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    double term = log_c + (k ? k * std::log(p) : 0.0) + (n - k ? (n - k) * std::log1p(-p) : 0.0);
    total += std::exp(term);
  }
  return std::min(total, 1.0);
}

struct Query {
  BinaryTemplate x;
  std::size_t user = 0;
  std::size_t distance = 0;
};

struct QueryOutcome {
  std::vector<Identifier> phi;
  std::vector<std::pair<Identifier, std::size_t>> checked;  // (id, distance)
};

struct PhaseTotals {
  OpCounters retrieve;
  OpCounters verify;
};

/// Retrieves and verifies every query, spreading them over `threads` workers
/// that each hold their own receiver and connection.
std::vector<QueryOutcome> run_queries(IndexServer& server, const SecretBundle& sec,
                                      const std::vector<Query>& queries, std::size_t threads,
                                      PhaseTotals& totals) {
  std::vector<QueryOutcome> out(queries.size());
  std::atomic<std::size_t> next{0};
  std::vector<PhaseTotals> per_worker(threads);
  std::vector<std::exception_ptr> errors(threads);

  auto work = [&](std::size_t w) {
    try {
      Receiver receiver(sec);
      auto channel = server.connect();
      for (std::size_t q; (q = next.fetch_add(1)) < queries.size();) {
        out[q].phi = receiver.retrieve(*channel, queries[q].x);
        per_worker[w].retrieve += receiver.counters();
        receiver.reset_counters();
        for (Identifier id : out[q].phi) {
          BinaryTemplate ref = receiver.fetch_template(*channel, id);
          out[q].checked.emplace_back(id, hamming_distance(queries[q].x, ref));
        }
        per_worker[w].verify += receiver.counters();
        receiver.reset_counters();
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (const auto& pw : per_worker) {
    totals.retrieve += pw.retrieve;
    totals.verify += pw.verify;
  }
  return out;
}

}  // namespace

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  if (SchemeParams::is_key(key)) {
    params.set(key, value);
  } else if (key == "enrolled") {
    enrolled = parse_count(key, value);
  } else if (key == "genuine_queries") {
    genuine_queries = parse_count(key, value);
  } else if (key == "impostor_queries") {
    impostor_queries = parse_count(key, value);
  } else if (key == "genuine_flip") {
    genuine_flip = parse_real(key, value);
  } else if (key == "threads") {
    threads = parse_count(key, value);
  } else if (key == "seed") {
    try {
      seed = parse_seed(value);
    } catch (const Error& e) {
      fail(ErrorCode::kConfig, std::string("seed: ") + e.what());
    }
  } else if (key == "trial_log") {
    trial_log = std::string(value);
  } else {
    fail(ErrorCode::kConfig, "unknown configuration key \"" + std::string(key) + "\"");
  }
}

void ExperimentConfig::validate() const {
  params.validate();
  require(enrolled >= 1, ErrorCode::kConfig, "enrolled must be at least 1");
  require(genuine_flip >= 0 && genuine_flip <= 1, ErrorCode::kConfig,
          "genuine_flip must lie in [0, 1]");
  require(threads >= 1 && threads <= 256, ErrorCode::kConfig, "threads must lie in [1, 256]");
}

double ExperimentReport::genuine_retrieval_rate() const {
  return genuine_trials ? static_cast<double>(genuine_retrieved) / genuine_trials : 0.0;
}

double ExperimentReport::eta_c() const {
  return genuine_close ? static_cast<double>(genuine_close_missed) / genuine_close : 0.0;
}

double ExperimentReport::eta_s() const {
  return impostor_far ? static_cast<double>(impostor_far_captured) / impostor_far : 0.0;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const SchemeParams& p = config.params;
  ExperimentReport rep;
  rep.config = config;
  Drbg root(config.seed);

  auto t0 = Clock::now();
  KeygenOutput kg = keygen(p, root.fork("keygen").seed());
  rep.keygen_seconds = seconds_since(t0);

  Drbg eps_rng = root.fork("eps");
  EpsEstimate eps = estimate_eps(kg.pub.lsh, p.lambda_min, p.lambda_max, 2000, eps_rng);
  rep.eps1 = eps.eps1;
  rep.eps2 = eps.eps2;
  rep.soundness_bound = index_bounds(eps.eps1, eps.eps2, p.m, p.hc_size()).soundness;
  rep.completeness_analytic =
      binomial_tail(p.mu, required_groups(p.threshold(), p.nu),
                    std::pow(1.0 - config.genuine_flip, static_cast<double>(p.t)));

  IndexServer server(kg.state, root.fork("server").seed());
  Sender sender(kg.pub, kg.allocator, root.fork("sender").seed());
  Registry registry;
  Drbg tpl_rng = root.fork("templates");
  std::vector<BinaryTemplate> refs;
  std::vector<Identifier> ids;
  {
    auto channel = server.connect();
    t0 = Clock::now();
    for (std::size_t u = 0; u < config.enrolled; ++u) {
      BinaryTemplate b = random_template(p.n_bits, tpl_rng);
      try {
        EnrolledUser e = enroll("user-" + std::to_string(u), b, sender, *channel, registry);
        refs.push_back(std::move(b));
        ids.push_back(e.identifier);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kOverflow) throw;
        ++rep.rejected_enrolments;
      }
    }
    rep.enrol.seconds = seconds_since(t0);
    rep.enrol.requests = config.enrolled;
    rep.enrol.ops = sender.counters();
  }
  rep.enrolled = refs.size();
  require(!refs.empty(), ErrorCode::kOverflow, "every enrolment was rejected");

  Drbg query_rng = root.fork("queries");
  std::vector<Query> genuine(config.genuine_queries);
  for (auto& q : genuine) {
    q.user = query_rng.uniform(refs.size());
    q.x = perturb_bsc(refs[q.user], config.genuine_flip, query_rng);
    q.distance = hamming_distance(q.x, refs[q.user]);
  }
  std::vector<Query> impostor(config.impostor_queries);
  for (auto& q : impostor) {
    q.x = random_template(p.n_bits, query_rng);
    q.distance = p.n_bits;
    for (const auto& r : refs) q.distance = std::min(q.distance, hamming_distance(q.x, r));
  }

  auto record = [&](bool is_genuine, const std::vector<Query>& qs,
                    const std::vector<QueryOutcome>& outs) {
    std::size_t sum = 0, max = 0;
    for (std::size_t k = 0; k < qs.size(); ++k) {
      TrialRecord t;
      t.genuine = is_genuine;
      t.trial = k;
      t.user = qs[k].user;
      t.distance = qs[k].distance;
      t.candidates = outs[k].phi.size();
      const Identifier target = is_genuine ? ids[qs[k].user] : 0;
      bool target_verified = false;
      for (const auto& [id, d] : outs[k].checked) {
        if (d > p.lambda_min) continue;
        ++t.verified;
        if (is_genuine && id == target) target_verified = true;
        else ++rep.false_verifications;
      }
      if (is_genuine) {
        t.retrieved = std::find(outs[k].phi.begin(), outs[k].phi.end(), target) != outs[k].phi.end();
        ++rep.genuine_trials;
        rep.genuine_retrieved += t.retrieved;
        rep.genuine_verified += target_verified;
        if (t.distance <= p.lambda_min) {
          ++rep.genuine_close;
          rep.genuine_close_missed += !t.retrieved;
        }
      } else {
        t.retrieved = !outs[k].phi.empty();
        ++rep.impostor_trials;
        rep.impostor_nonempty += t.retrieved;
        if (t.distance > p.lambda_max) {
          ++rep.impostor_far;
          rep.impostor_far_captured += t.retrieved;
        }
      }
      sum += t.candidates;
      max = std::max(max, t.candidates);
      rep.trials.push_back(t);
    }
    const double mean = qs.empty() ? 0.0 : static_cast<double>(sum) / qs.size();
    if (is_genuine) {
      rep.genuine_candidates_mean = mean;
      rep.genuine_candidates_max = max;
    } else {
      rep.impostor_candidates_mean = mean;
      rep.impostor_candidates_max = max;
    }
  };

  for (int phase = 0; phase < 2; ++phase) {
    const bool is_genuine = phase == 0;
    const auto& qs = is_genuine ? genuine : impostor;
    PhaseTotals totals;
    t0 = Clock::now();
    auto outs = run_queries(server, kg.sec, qs, config.threads, totals);
    PhaseCost& cost = is_genuine ? rep.genuine : rep.impostor;
    cost.seconds = seconds_since(t0);
    cost.requests = qs.size();
    cost.ops = totals.retrieve;
    rep.verification.requests += qs.size();
    rep.verification.ops += totals.verify;
    record(is_genuine, qs, outs);
  }
  return rep;
}

std::string ExperimentReport::to_text() const {
  std::ostringstream o;
  o.precision(6);
  const auto& c = config;
  o << "# fese experiment report\n";
  o << c.params.to_config();
  o << "enrolled_requested = " << c.enrolled << '\n'
    << "enrolled = " << enrolled << '\n'
    << "rejected_enrolments = " << rejected_enrolments << '\n'
    << "genuine_flip = " << c.genuine_flip << '\n'
    << "seed = " << to_hex(c.seed) << '\n'
    << "threads = " << c.threads << '\n'
    << "eps1 = " << eps1 << '\n'
    << "eps2 = " << eps2 << '\n'
    << "genuine_trials = " << genuine_trials << '\n'
    << "genuine_retrieved = " << genuine_retrieved << '\n'
    << "genuine_retrieval_rate = " << genuine_retrieval_rate() << '\n'
    << "genuine_verified = " << genuine_verified << '\n'
    << "completeness_analytic = " << completeness_analytic << '\n'
    << "genuine_within_lambda_min = " << genuine_close << '\n'
    << "eta_c = " << eta_c() << '\n'
    << "impostor_trials = " << impostor_trials << '\n'
    << "impostor_beyond_lambda_max = " << impostor_far << '\n'
    << "impostor_nonempty = " << impostor_nonempty << '\n'
    << "eta_s = " << eta_s() << '\n'
    << "soundness_bound = " << soundness_bound << '\n'
    << "false_verifications = " << false_verifications << '\n'
    << "genuine_candidates_mean = " << genuine_candidates_mean << '\n'
    << "genuine_candidates_max = " << genuine_candidates_max << '\n'
    << "impostor_candidates_mean = " << impostor_candidates_mean << '\n'
    << "impostor_candidates_max = " << impostor_candidates_max << '\n'
    << "keygen_seconds = " << keygen_seconds << '\n';
  auto phase = [&](const char* name, const PhaseCost& pc) {
    o << name << "_requests = " << pc.requests << '\n'
      << name << "_seconds = " << pc.seconds << '\n'
      << name << "_hash_evals_per_request = " << pc.per_request(pc.ops.hash_evals) << '\n'
      << name << "_encryptions_per_request = " << pc.per_request(pc.ops.encryptions) << '\n'
      << name << "_decryptions_per_request = " << pc.per_request(pc.ops.decryptions) << '\n'
      << name << "_cached_decryptions_per_request = "
      << pc.per_request(pc.ops.cached_decryptions) << '\n'
      << name << "_dlog_solves_per_request = " << pc.per_request(pc.ops.dlog_solves) << '\n'
      << name << "_frames_per_request = " << pc.per_request(pc.ops.frames) << '\n'
      << name << "_bytes_sent_per_request = " << pc.per_request(pc.ops.bytes_sent) << '\n'
      << name << "_bytes_received_per_request = " << pc.per_request(pc.ops.bytes_received)
      << '\n';
  };
  phase("enrol", enrol);
  phase("genuine", genuine);
  phase("impostor", impostor);
  phase("verification", verification);
  return o.str();
}

std::string ExperimentReport::trial_csv() const {
  std::string out = "kind,trial,user,distance,retrieved,candidates,verified\n";
  for (const auto& t : trials) {
    out += t.genuine ? "genuine," : "impostor,";
    out += std::to_string(t.trial) + ',' + (t.genuine ? std::to_string(t.user) : "") + ',' +
           std::to_string(t.distance) + ',' + (t.retrieved ? "1" : "0") + ',' +
           std::to_string(t.candidates) + ',' + std::to_string(t.verified) + '\n';
  }
  return out;
}

std::string run_bench(const BenchConfig& config) {
  const SchemeParams& p = config.params;
  p.validate();
  require(config.repetitions >= 1 && config.enrolled >= 1, ErrorCode::kConfig,
          "bench needs at least one repetition and one enrolled template");
  Drbg root(config.seed);
  std::ostringstream o;
  o.precision(6);
  o << "# fese bench (microseconds per operation)\n" << p.to_config();

  auto t0 = Clock::now();
  KeygenOutput kg = keygen(p, root.fork("keygen").seed());
  o << "keygen_us = " << seconds_since(t0) * 1e6 << '\n';

  const Group& group = kg.pub.group();
  const std::size_t reps = config.repetitions;
  Drbg rng = root.fork("bench");
  auto time_us = [&](auto&& fn) {
    auto start = Clock::now();
    for (std::size_t k = 0; k < reps; ++k) fn();
    return seconds_since(start) * 1e6 / static_cast<double>(reps);
  };

  const CompositeFamily comp = kg.pub.composite();
  BinaryTemplate x = random_template(p.n_bits, rng);
  o << "composite_hash_all_us = " << time_us([&] { (void)comp.eval_all(x); }) << '\n';
  GroupElement e = group.random_element(rng);
  Ciphertext c = eg_encrypt(group, kg.pub.elgamal_pub, e, rng);
  o << "elgamal_encrypt_us = "
    << time_us([&] { c = eg_encrypt(group, kg.pub.elgamal_pub, e, rng); }) << '\n';
  o << "elgamal_decrypt_us = " << time_us([&] { e = eg_decrypt(group, kg.sec.secret, c); })
    << '\n';
  const Scalar s = group.random_scalar(rng);
  o << "elgamal_pow_us = " << time_us([&] { (void)eg_pow(group, c, s); }) << '\n';

  IndexServer server(kg.state, root.fork("server").seed());
  auto channel = server.connect();
  Sender sender(kg.pub, kg.allocator, root.fork("sender").seed());
  std::vector<BinaryTemplate> refs;
  t0 = Clock::now();
  for (std::size_t u = 0; u < config.enrolled; ++u) {
    refs.push_back(random_template(p.n_bits, rng));
    sender.send(*channel, refs.back());
  }
  o << "send_us = " << seconds_since(t0) * 1e6 / static_cast<double>(config.enrolled) << '\n';

  const StoreShape shape{p.m, p.l, slot_width(group)};
  const auto idx = comp.eval_all(x);
  call(*channel, {FrameType::kRetrieveBegin, {}},
       p.mode == SchemeMode::kBase ? FrameType::kAck : FrameType::kRerandPub);
  o << "pir_transfer_us = "
    << time_us([&] { (void)pir_query_many(*channel, p.query, shape, idx); }) << '\n';

  Receiver receiver(kg.sec);
  std::size_t k = 0;
  o << "retrieve_genuine_us = " << time_us([&] {
    (void)receiver.retrieve(*channel, perturb_bsc(refs[k++ % refs.size()], 0.01, rng));
  }) << '\n';
  o << "retrieve_impostor_us = "
    << time_us([&] { (void)receiver.retrieve(*channel, random_template(p.n_bits, rng)); })
    << '\n';
  o << "verify_candidate_us = "
    << time_us([&] { (void)hamming_distance(receiver.fetch_template(*channel, 0), x); })
    << '\n';
  return o.str();
}

}  // namespace fese
