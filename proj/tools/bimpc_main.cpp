#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bimpc/audit.hpp"
#include "bimpc/errors.hpp"
#include "bimpc/harness.hpp"
#include "bimpc/selfcheck.hpp"

namespace {

bimpc::BitVector read_bits_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bimpc::InputError("cannot open input file: " + path);
  std::vector<std::uint8_t> bits;
  char c = 0;
  while (in.get(c)) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    if (c == '0' || c == '1') {
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
      continue;
    }
    throw bimpc::InputError("input file holds a character other than 0/1: " +
                            path);
  }
  if (bits.empty()) throw bimpc::InputError("input file holds no bits: " + path);
  return bimpc::BitVector(std::move(bits));
}

int cmd_run(const std::string& path_a, const std::string& path_b,
            const CLI::Option* prime_opt, std::uint32_t prime,
            const CLI::Option* pad_opt, std::uint64_t pad,
            const CLI::Option* seed_opt, std::uint64_t seed,
            const std::string& transcript_path) {
  const bimpc::BitVector a = read_bits_file(path_a);
  const bimpc::BitVector b = read_bits_file(path_b);
  if (a.size() != b.size()) {
    throw bimpc::InputError("the two inputs must have the same length");
  }

  bimpc::SessionConfig config;
  config.input_length = a.size();
  config.pad_length = pad_opt->count() != 0
                          ? static_cast<std::size_t>(pad)
                          : a.size();
  config.modulus = prime_opt->count() != 0
                       ? prime
                       : bimpc::smallest_prime_above(2 * a.size());
  std::uint64_t root = seed;
  if (seed_opt->count() == 0) {
    std::random_device device;
    root = (static_cast<std::uint64_t>(device()) << 32) ^ device();
    std::cerr << "seed: " << root << "\n";
  }
  config.seeds = bimpc::SeedSet::derive(root);
  config.session_id = "cli";
  config.validate();

  const bimpc::SessionOutcome out = bimpc::run_session(a, b, config);
  if (!out.integrity_ok) throw bimpc::IntegrityError(out.integrity_message);
  if (!transcript_path.empty()) {
    std::ofstream f(transcript_path, std::ios::binary);
    if (!f) {
      throw bimpc::InputError("cannot write transcript: " + transcript_path);
    }
    bimpc::dump_transcript(out.transcript, f);
  }
  std::cout << out.y << "\n";
  return 0;
}

int cmd_audit(std::size_t n, std::size_t pad, const CLI::Option* prime_opt,
              std::uint32_t prime, std::uint64_t cap, unsigned jobs,
              const std::string& lh_mode, const std::string& out_path) {
  bimpc::SessionConfig config;
  config.input_length = n;
  config.pad_length = pad;
  config.modulus =
      prime_opt->count() != 0 ? prime : bimpc::smallest_prime_above(2 * n);
  config.session_id = "audit";
  config.validate();

  std::vector<bimpc::CheckReport> checks;
  checks.push_back(bimpc::check_master_privacy(config, cap, jobs));
  checks.push_back(bimpc::check_client_privacy(config, cap, jobs));
  for (auto& report : bimpc::check_sabotage_detection(config, cap, jobs)) {
    checks.push_back(std::move(report));
  }

  if (lh_mode != "off") {
    const std::size_t total = config.total_length();
    const std::uint32_t q_lh =
        std::uint64_t{config.modulus} > 2 * std::uint64_t{total}
            ? config.modulus
            : bimpc::smallest_prime_above(2 * total);
    bimpc::SessionConfig ca = config;
    ca.modulus = q_lh;
    bimpc::SessionConfig cb = config;
    cb.input_length = total;
    cb.pad_length = 0;
    cb.modulus = q_lh;
    const bimpc::LengthHidingResult lh =
        bimpc::check_length_hiding(ca, cb, lh_mode == "full", cap);
    bimpc::CheckReport report;
    report.name = "length-hiding n=" + std::to_string(n) + " pad=" +
                  std::to_string(pad) + " against n=" + std::to_string(total) +
                  " pad=0 q=" + std::to_string(q_lh) +
                  (lh.distributional_ran ? " (distributional)"
                                         : " (structural)");
    report.passed = lh.passed();
    report.work = lh.assignments + 2;
    report.detail = lh.structural.detail;
    if (!lh.distributional_detail.empty()) {
      report.detail += "; " + lh.distributional_detail;
    }
    checks.push_back(std::move(report));
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw bimpc::InputError("cannot write report: " + out_path);
  bimpc::write_audit_report(checks, out);

  bool all = true;
  for (const auto& check : checks) all = all && check.passed;
  std::cout << "audit: " << (all ? "pass" : "fail") << "\n";
  return all ? 0 : 1;
}

int cmd_selftest(std::uint64_t seed) {
  const std::vector<bimpc::SuiteResult> suites =
      bimpc::run_all_selfchecks(seed);
  bool all = true;
  for (const auto& suite : suites) {
    std::cout << (suite.passed ? "[pass] " : "[FAIL] ") << suite.name
              << " cases=" << suite.cases << "\n";
    if (!suite.failure.empty()) std::cout << "  " << suite.failure << "\n";
    all = all && suite.passed;
  }
  std::cout << "selftest: " << (all ? "pass" : "fail") << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bimpc: private binary dot product between two clients and a master"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "bimpc 1.0.0");

  std::string path_a, path_b, transcript_path;
  std::uint32_t run_prime = 0;
  std::uint64_t run_pad = 0;
  std::uint64_t run_seed = 0;
  CLI::App* run = app.add_subcommand(
      "run", "run one session and print the reconstructed dot product");
  run->add_option("--input-a", path_a,
                  "file with client 1's bits (0/1, whitespace ignored)")
      ->required()
      ->envname("BIMPC_INPUT_A");
  run->add_option("--input-b", path_b, "file with client 2's bits")
      ->required()
      ->envname("BIMPC_INPUT_B");
  const CLI::Option* run_prime_opt =
      run->add_option("--prime", run_prime,
                      "field modulus, an odd prime above twice the input "
                      "length; default picks the smallest")
          ->envname("BIMPC_PRIME");
  const CLI::Option* run_pad_opt =
      run->add_option("--pad", run_pad,
                      "chaff entries hiding the input length; default equals "
                      "the input length")
          ->envname("BIMPC_PAD");
  const CLI::Option* run_seed_opt =
      run->add_option("--seed", run_seed,
                      "root seed; default draws one and echoes it to stderr")
          ->envname("BIMPC_SEED");
  run->add_option("--transcript", transcript_path,
                  "write the redacted message transcript to this file")
      ->envname("BIMPC_TRANSCRIPT");

  std::size_t audit_n = 1;
  std::size_t audit_pad = 1;
  std::uint32_t audit_prime = 0;
  std::uint64_t audit_cap = 100000000ULL;
  unsigned audit_jobs = 1;
  std::string audit_lh = "structural";
  std::string audit_out;
  CLI::App* audit = app.add_subcommand(
      "audit", "exhaustively enumerate sessions and verify privacy");
  audit->add_option("--n", audit_n, "input length to audit")
      ->envname("BIMPC_N");
  audit->add_option("--pad", audit_pad, "chaff entries")->envname("BIMPC_PAD");
  const CLI::Option* audit_prime_opt =
      audit->add_option("--prime", audit_prime,
                        "field modulus; default picks the smallest valid one")
          ->envname("BIMPC_PRIME");
  audit->add_option("--cap", audit_cap,
                    "refuse enumerations needing more assignments than this")
      ->envname("BIMPC_CAP");
  audit->add_option("--jobs", audit_jobs,
                    "worker threads for the enumeration")
      ->envname("BIMPC_JOBS");
  audit
      ->add_option("--lh", audit_lh,
                   "length-hiding depth: off, structural, or full")
      ->check(CLI::IsMember({"off", "structural", "full"}))
      ->envname("BIMPC_LH");
  audit->add_option("--out", audit_out, "write the audit report here")
      ->required()
      ->envname("BIMPC_OUT");

  std::uint64_t selftest_seed = 1;
  CLI::App* selftest =
      app.add_subcommand("selftest", "run the built-in check suites");
  selftest->add_option("--seed", selftest_seed, "seed for the random sweeps")
      ->envname("BIMPC_SEED");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      return cmd_run(path_a, path_b, run_prime_opt, run_prime, run_pad_opt,
                     run_pad, run_seed_opt, run_seed, transcript_path);
    }
    if (audit->parsed()) {
      return cmd_audit(audit_n, audit_pad, audit_prime_opt, audit_prime,
                       audit_cap, audit_jobs, audit_lh, audit_out);
    }
    if (selftest->parsed()) {
      return cmd_selftest(selftest_seed);
    }
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const bimpc::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const bimpc::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const bimpc::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
