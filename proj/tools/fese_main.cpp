#include <sodium.h>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "fese/cli/config.hpp"
#include "fese/cli/files.hpp"
#include "fese/cli/selftest.hpp"
#include "fese/cli/tcp.hpp"
#include "fese/error.hpp"
#include "fese/identification/experiment.hpp"
#include "fese/identification/identification.hpp"
#include "fese/protocol/keygen.hpp"

using namespace fese;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitProtocol = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
      return kExitUsage;
    case ErrorCode::kDimension:
    case ErrorCode::kParameter:
    case ErrorCode::kFormat:
    case ErrorCode::kEncoding:
    case ErrorCode::kDecryption:
    case ErrorCode::kHeaderMismatch:
      return kExitData;
    case ErrorCode::kOverflow:
    case ErrorCode::kProtocol:
    case ErrorCode::kTransport:
    case ErrorCode::kIndexInconsistency:
    case ErrorCode::kCorruptShare:
      return kExitProtocol;
  }
  return kExitProtocol;
}

struct Globals {
  std::string seed_hex;

  /// Root seed for one subcommand: derived from --seed when given, fresh
  /// otherwise.
  Seed seed_for(std::string_view label) const {
    if (seed_hex.empty()) {
      Seed s;
      randombytes_buf(s.data(), s.size());
      return s;
    }
    return Drbg(parse_seed(seed_hex)).fork(label).seed();
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  write_file_atomic(path, ByteView(reinterpret_cast<const std::uint8_t*>(text.data()),
                                   text.size()));
}

std::string config_path_or_default(const std::string& given) {
  return given.empty() ? default_config_path() : given;
}

/// A channel to the index: remote when an endpoint is given, otherwise an
/// in-process server over the workspace's index file.
struct IndexConnection {
  std::unique_ptr<IndexServer> local;
  std::unique_ptr<Channel> channel;

  IndexConnection(const Workspace& ws, const std::string& endpoint, const Seed& server_seed) {
    if (endpoint.empty()) {
      local = std::make_unique<IndexServer>(ws.load_index(), server_seed);
      channel = local->connect();
    } else {
      channel = std::make_unique<TcpChannel>(parse_endpoint(endpoint));
    }
  }
};

// ---------------------------------------------------------------------------

struct KeygenArgs {
  std::string out;
  std::string config;
  std::vector<std::string> overrides;
  bool force = false;
};

int cmd_keygen(const Globals& g, const KeygenArgs& a) {
  SchemeParams params = load_params(config_path_or_default(a.config));
  for (const auto& kv : a.overrides) {
    auto eq = kv.find('=');
    require(eq != std::string::npos, ErrorCode::kConfig, "--set expects key=value, got " + kv);
    params.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  params.validate();
  Workspace ws{a.out};
  std::filesystem::create_directories(a.out);
  require(a.force || !file_exists(ws.index()), ErrorCode::kConfig,
          ws.index() + " exists; pass --force to replace it");

  KeygenOutput kg = keygen(params, g.seed_for("keygen"));
  write_file_atomic(ws.public_key(), kg.pub.serialize());
  write_file_atomic(ws.secret_key(), kg.sec.serialize());
  write_text(ws.params(), params.to_config());
  ws.save_index(kg.state);
  ws.save_allocator(kg.allocator);
  ws.save_registry(Registry{});
  std::cout << "wrote " << a.out << " (m=" << params.m << " l=" << params.l
            << " |Hc|=" << params.hc_size() << " mode=" << scheme_mode_name(params.mode) << ")\n";
  return kExitOk;
}

struct TemplateArgs {
  std::string in;
  std::string out;
  std::size_t bits = 256;
  std::optional<double> flip;
  std::optional<std::size_t> distance;
};

int cmd_template_random(const Globals& g, const TemplateArgs& a) {
  Drbg rng(g.seed_for("template"));
  write_file_atomic(a.out, encode_template_file(random_template(a.bits, rng)));
  return kExitOk;
}

int cmd_template_perturb(const Globals& g, const TemplateArgs& a) {
  require(a.flip.has_value() != a.distance.has_value(), ErrorCode::kConfig,
          "give exactly one of --flip and --distance");
  Drbg rng(g.seed_for("template"));
  BinaryTemplate x = decode_template_file(read_file(a.in));
  BinaryTemplate y = a.flip ? perturb_bsc(x, *a.flip, rng) : perturb_exact(x, *a.distance, rng);
  write_file_atomic(a.out, encode_template_file(y));
  std::cout << "distance " << hamming_distance(x, y) << '\n';
  return kExitOk;
}

struct EnrollArgs {
  std::string dir;
  std::string id;
  std::string template_file;
  std::size_t synthetic = 0;
  std::string save_templates;
  std::string connect;
};

int cmd_enroll(const Globals& g, const EnrollArgs& a) {
  require((a.synthetic > 0) != !a.template_file.empty(), ErrorCode::kConfig,
          "give either --template with --id, or --synthetic");
  require(a.template_file.empty() || !a.id.empty(), ErrorCode::kConfig,
          "--template needs --id");
  Workspace ws{a.dir};
  PublicBundle pub = ws.load_public();
  Registry registry = ws.load_registry();
  Drbg root(g.seed_for("enroll"));
  IndexConnection conn(ws, a.connect, root.fork("server").seed());
  handshake(*conn.channel, pub.header());
  Sender sender(pub, ws.load_allocator(), root.fork("sender").seed());

  std::vector<std::pair<std::string, BinaryTemplate>> batch;
  if (!a.template_file.empty()) {
    batch.emplace_back(a.id, decode_template_file(read_file(a.template_file)));
  } else {
    Drbg tpl = root.fork("templates");
    if (!a.save_templates.empty()) std::filesystem::create_directories(a.save_templates);
    const std::size_t base = registry.size();
    for (std::size_t k = 0; k < a.synthetic; ++k)
      batch.emplace_back("user-" + std::to_string(base + k),
                         random_template(pub.params.n_bits, tpl));
  }

  int status = kExitOk;
  for (const auto& [name, b] : batch) {
    try {
      EnrolledUser u = enroll(name, b, sender, *conn.channel, registry);
      std::cout << u.pseudo_identity << '\t' << u.identifier << '\n';
      if (!a.save_templates.empty())
        write_file_atomic(Workspace{a.save_templates}.path((name + ".tpl").c_str()),
                          encode_template_file(b));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kOverflow) throw;
      std::cerr << "fese: " << name << ": " << e.what() << '\n';
      status = exit_code_for(e.code());
    }
  }
  ws.save_allocator(sender.allocator());
  ws.save_registry(registry);
  if (conn.local) ws.save_index(conn.local->snapshot());
  return status;
}

struct IdentifyArgs {
  std::string dir;
  std::string template_file;
  std::string connect;
  bool templates = false;
};

int cmd_identify(const Globals& g, const IdentifyArgs& a) {
  Workspace ws{a.dir};
  SecretBundle sec = ws.load_secret();
  Registry registry = ws.load_registry();
  BinaryTemplate b = decode_template_file(read_file(a.template_file));
  IndexConnection conn(ws, a.connect, g.seed_for("identify"));
  handshake(*conn.channel, sec.pub.header());
  Receiver receiver(sec);
  IdentificationResult result = identify(b, receiver, *conn.channel, registry, a.templates);
  for (const auto& c : result.candidates) {
    std::cout << "candidate " << c.pseudo_identity << " identifier=" << c.identifier
              << " distance=" << c.distance << " verified=" << (c.verified ? "yes" : "no");
    if (c.reference) std::cout << " template=" << to_hex(c.reference->packed());
    std::cout << '\n';
  }
  auto ids = result.identities();
  std::cout << "result";
  if (ids.empty()) std::cout << " none";
  for (const auto& id : ids) std::cout << ' ' << id;
  std::cout << '\n';
  return kExitOk;
}

struct ServeArgs {
  std::string dir;
  std::string listen = "127.0.0.1:7450";
  std::string port_file;
};

int cmd_serve(const Globals& g, const ServeArgs& a) {
  Workspace ws{a.dir};
  IndexServer server(ws.load_index(), g.seed_for("serve"));

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  TcpServer tcp(server, parse_endpoint(a.listen));
  std::thread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    tcp.stop();
  });
  std::cout << "listening on " << parse_endpoint(a.listen).host << ':' << tcp.port() << std::endl;
  if (!a.port_file.empty()) write_text(a.port_file, std::to_string(tcp.port()) + "\n");
  tcp.run();
  watcher.join();
  ws.save_index(server.snapshot());
  std::cout << "saved " << ws.index() << std::endl;
  return kExitOk;
}

struct ExperimentArgs {
  std::string config;
  std::string out;
  std::string trial_log;
  std::size_t threads = 0;
};

int cmd_experiment(const Globals& g, const ExperimentArgs& a) {
  ExperimentConfig cfg;
  const std::string path = config_path_or_default(a.config);
  require(!path.empty(), ErrorCode::kConfig, "experiment needs --config or FESE_CONFIG");
  try {
    apply_key_values(cfg, parse_key_values(read_text_file(path)));
  } catch (const Error& e) {
    fail(e.code(), path + ": " + e.what());
  }
  if (!g.seed_hex.empty()) cfg.seed = parse_seed(g.seed_hex);
  if (a.threads) cfg.threads = a.threads;
  if (!a.trial_log.empty()) cfg.trial_log = a.trial_log;
  ExperimentReport rep = run_experiment(cfg);
  write_text(a.out, rep.to_text());
  if (!cfg.trial_log.empty()) write_text(cfg.trial_log, rep.trial_csv());
  return kExitOk;
}

struct BenchArgs {
  std::string config;
  std::string out;
  std::size_t reps = 50;
  std::size_t enrolled = 100;
};

int cmd_bench(const Globals& g, const BenchArgs& a) {
  BenchConfig cfg;
  cfg.params = load_params(config_path_or_default(a.config));
  cfg.repetitions = a.reps;
  cfg.enrolled = a.enrolled;
  cfg.seed = g.seed_for("bench");
  write_text(a.out, run_bench(cfg));
  return kExitOk;
}

int cmd_selftest(const Globals& g) {
  return report_selftest(run_selftest(g.seed_for("selftest")), std::cout) == 0 ? kExitOk
                                                                               : kExitProtocol;
}

}  // namespace

int main(int argc, char** argv) {
  if (sodium_init() < 0) {
    std::cerr << "fese: libsodium failed to initialize\n";
    return kExitProtocol;
  }

  CLI::App app{"Error-tolerant searchable encryption over binary templates"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed_hex, "32-byte hex seed; makes the run reproducible");

  KeygenArgs keygen_args;
  auto* keygen_cmd = app.add_subcommand("keygen", "Generate keys and an empty padded index");
  keygen_cmd->add_option("--out", keygen_args.out, "Output directory")->required();
  keygen_cmd->add_option("--config", keygen_args.config, "Parameter file (key = value)");
  keygen_cmd->add_option("--set", keygen_args.overrides, "Override one parameter, key=value");
  keygen_cmd->add_flag("--force", keygen_args.force, "Replace an existing index");

  TemplateArgs tpl_args;
  auto* tpl_cmd = app.add_subcommand("template", "Create or perturb template files");
  tpl_cmd->require_subcommand(1);
  auto* tpl_random = tpl_cmd->add_subcommand("random", "Uniformly random template");
  tpl_random->add_option("--out", tpl_args.out)->required();
  tpl_random->add_option("--bits", tpl_args.bits, "Template length N");
  auto* tpl_perturb = tpl_cmd->add_subcommand("perturb", "Noisy copy of a template");
  tpl_perturb->add_option("--in", tpl_args.in)->required();
  tpl_perturb->add_option("--out", tpl_args.out)->required();
  tpl_perturb->add_option("--flip", tpl_args.flip, "Independent per-bit flip probability");
  tpl_perturb->add_option("--distance", tpl_args.distance, "Flip exactly this many bits");

  EnrollArgs enroll_args;
  auto* enroll_cmd = app.add_subcommand("enroll", "Enrol templates (runs Send)");
  enroll_cmd->add_option("--dir", enroll_args.dir, "Key/index directory")->required();
  enroll_cmd->add_option("--id", enroll_args.id, "Pseudo-identity");
  enroll_cmd->add_option("--template", enroll_args.template_file, "Template file");
  enroll_cmd->add_option("--synthetic", enroll_args.synthetic, "Enrol this many random users");
  enroll_cmd->add_option("--save-templates", enroll_args.save_templates,
                         "Directory for the synthetic templates");
  enroll_cmd->add_option("--connect", enroll_args.connect, "Remote server host:port");

  IdentifyArgs identify_args;
  auto* identify_cmd = app.add_subcommand("identify", "Identify a template (runs Retrieve)");
  identify_cmd->add_option("--dir", identify_args.dir, "Key/index directory")->required();
  identify_cmd->add_option("--template", identify_args.template_file)->required();
  identify_cmd->add_option("--connect", identify_args.connect, "Remote server host:port");
  identify_cmd->add_flag("--templates", identify_args.templates,
                         "Also print candidates' reference templates");

  ServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("serve", "Serve an index over TCP");
  serve_cmd->add_option("--dir", serve_args.dir, "Key/index directory")->required();
  serve_cmd->add_option("--listen", serve_args.listen, "host:port, port 0 picks one");
  serve_cmd->add_option("--port-file", serve_args.port_file, "Write the bound port here");

  ExperimentArgs exp_args;
  auto* exp_cmd = app.add_subcommand("experiment", "Run the statistical experiment");
  exp_cmd->add_option("--config", exp_args.config, "Experiment file (key = value)");
  exp_cmd->add_option("--out", exp_args.out, "Report path (default stdout)");
  exp_cmd->add_option("--trial-log", exp_args.trial_log, "CSV trial log path");
  exp_cmd->add_option("--threads", exp_args.threads, "Parallel query workers");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Per-phase timing report");
  bench_cmd->add_option("--config", bench_args.config, "Parameter file (key = value)");
  bench_cmd->add_option("--out", bench_args.out, "Report path (default stdout)");
  bench_cmd->add_option("--reps", bench_args.reps, "Repetitions per measurement");
  bench_cmd->add_option("--enrolled", bench_args.enrolled, "Templates enrolled first");

  auto* selftest_cmd = app.add_subcommand("selftest", "Run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!g.seed_hex.empty()) parse_seed(g.seed_hex);
    if (*keygen_cmd) return cmd_keygen(g, keygen_args);
    if (*tpl_random) return cmd_template_random(g, tpl_args);
    if (*tpl_perturb) return cmd_template_perturb(g, tpl_args);
    if (*enroll_cmd) return cmd_enroll(g, enroll_args);
    if (*identify_cmd) return cmd_identify(g, identify_args);
    if (*serve_cmd) return cmd_serve(g, serve_args);
    if (*exp_cmd) return cmd_experiment(g, exp_args);
    if (*bench_cmd) return cmd_bench(g, bench_args);
    if (*selftest_cmd) return cmd_selftest(g);
  } catch (const Error& e) {
    std::cerr << "fese: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "fese: " << e.what() << '\n';
    return kExitProtocol;
  }
  return kExitUsage;
}
