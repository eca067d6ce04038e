// Copyright (c) the strongmin contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Command line front end.  Three subcommands:
//   linearize   problem file in, certified result file out
//   verify      re-derive the certificate and transfer agreement of a result
//   analyze     print the structural report stored behind a result's blocks
//
// Exit codes: 0 success, 1 unreadable or malformed input, 2 structure or
// verification failure, 3 flagged rank diagnostics under --strict.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "strongmin/io.hpp"

namespace {

using namespace strongmin;

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitStructure = 2;
constexpr int kExitStrictFlags = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("STRONGMIN_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::fprintf(stderr, "warning: ignoring non-numeric STRONGMIN_SEED\n");
    }
  }
  return 0x5eedULL;
}

std::string format_complex(const Complex& z) {
  char buf[80];
  if (z.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.6g", z.real());
  } else {
    std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
  }
  return buf;
}

void print_certificate(const MinimalityCertificate& cert) {
  const auto flag = [](bool b) { return b ? "yes" : "NO"; };
  std::printf("certificate:\n");
  std::printf("  controllable at finite points:   %s\n",
              flag(cert.controllable_finite));
  std::printf("  controllable at infinity:        %s\n",
              flag(cert.controllable_infinite));
  std::printf("  observable at finite points:     %s\n",
              flag(cert.observable_finite));
  std::printf("  observable at infinity:          %s\n",
              flag(cert.observable_infinite));
  std::printf("  margin (controllability): %.3g\n", cert.margin_controllable);
  std::printf("  margin (observability):   %.3g\n", cert.margin_observable);
  for (const MinimalityWitness& w : cert.failures) {
    if (w.at_infinity) {
      std::printf("  failure at infinity: rank %lld, needed %lld\n",
                  static_cast<long long>(w.rank_found),
                  static_cast<long long>(w.rank_needed));
    } else {
      std::printf("  failure near z = %s: rank %lld, needed %lld\n",
                  format_complex(w.point).c_str(),
                  static_cast<long long>(w.rank_found),
                  static_cast<long long>(w.rank_needed));
    }
  }
}

struct LinearizeArgs {
  std::string input;
  std::string output;
  std::optional<std::string> structure;
  std::optional<double> tolerance;
  std::optional<Index> k;
  std::optional<std::uint64_t> seed;
  bool strict = false;
};

int cmd_linearize(const LinearizeArgs& args) {
  ProblemFile prob;
  try {
    prob = parse_problem(read_text_file(args.input));
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  }
  std::optional<StructureTag> tag_override;
  if (args.structure.has_value()) {
    const auto tag = structure_tag_from_string(*args.structure);
    if (!tag.has_value()) {
      std::fprintf(stderr, "error: unknown structure tag '%s'\n",
                   args.structure->c_str());
      return kExitBadInput;
    }
    tag_override = *tag;
  }
  const std::uint64_t seed = args.seed.has_value()
                                 ? *args.seed
                                 : prob.options.seed.value_or(default_seed());
  ResultFile res;
  try {
    res = linearize_problem(prob, tag_override, args.tolerance, args.k, seed);
  } catch (const StructureError& e) {
    std::fprintf(stderr, "structure validation failed: %s\n", e.what());
    return kExitStructure;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  }
  try {
    write_text_file(args.output, canonical_json(result_to_json(res)));
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  }
  std::printf("wrote %s\n", args.output.c_str());
  std::printf("state dimension: %lld\n",
              static_cast<long long>(res.system.state_dim()));
  if (res.diagnostics.poly_rank >= 0) {
    std::printf("polynomial part rank: %lld\n",
                static_cast<long long>(res.diagnostics.poly_rank));
  }
  if (res.diagnostics.sp_rank >= 0) {
    std::printf("strictly proper part rank: %lld (moment order %lld)\n",
                static_cast<long long>(res.diagnostics.sp_rank),
                static_cast<long long>(res.diagnostics.k_used));
  }
  print_certificate(res.certificate);
  const bool flagged = res.diagnostics.borderline ||
                       !res.diagnostics.stabilized ||
                       !res.certificate.passed();
  if (res.diagnostics.borderline) {
    std::printf("note: a numerical rank decision was borderline\n");
  }
  if (!res.diagnostics.stabilized) {
    std::printf(
        "note: the moment order never stabilized within the given tail\n");
  }
  if (!res.certificate.passed()) {
    std::printf("note: the certificate FAILED\n");
  }
  if (args.strict && flagged) return kExitStrictFlags;
  return kExitOk;
}

int cmd_verify(const std::string& result_path, const std::string& problem_path) {
  ResultFile res;
  ProblemFile prob;
  try {
    res = parse_result(read_text_file(result_path));
    prob = parse_problem(read_text_file(problem_path));
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  }
  VerifyOutcome v;
  try {
    v = verify_result(res, prob);
  } catch (const Error& e) {
    std::fprintf(stderr, "verification error: %s\n", e.what());
    return kExitStructure;
  }
  if (!v.digest_match) {
    std::fprintf(stderr,
                 "warning: problem digest does not match the result "
                 "(expected %s)\n",
                 res.digest.c_str());
  }
  print_certificate(v.certificate);
  if (v.points_checked > 0) {
    std::printf("transfer residual at %lld sample points: %.3g\n",
                static_cast<long long>(v.points_checked),
                v.max_point_residual);
  }
  std::printf("coefficient and moment recovery residual: %.3g\n",
              v.max_block_residual);
  if (v.ok()) {
    std::printf("verification PASSED\n");
    return kExitOk;
  }
  std::printf("verification FAILED\n");
  return kExitStructure;
}

struct AnalyzeArgs {
  std::string result_path;
  bool infinity = false;
  bool eigs = false;
  bool audit = false;
};

int cmd_analyze(const AnalyzeArgs& args) {
  ResultFile res;
  try {
    res = parse_result(read_text_file(args.result_path));
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  }
  const bool all = !args.infinity && !args.eigs && !args.audit;
  const RankTolerance tol = RankTolerance::relative(res.tolerance);
  StructuralReport rep;
  try {
    rep = build_structural_report(res.system, tol, res.seed);
  } catch (const PreconditionError& e) {
    std::fprintf(stderr,
                 "unsupported: the stored pencil is not strongly minimal, "
                 "so structural indices are not readable from it (%s)\n",
                 e.what());
    return kExitStructure;
  } catch (const Error& e) {
    std::fprintf(stderr, "analysis error: %s\n", e.what());
    return kExitStructure;
  }
  std::printf("transfer normal rank: %lld\n",
              static_cast<long long>(rep.transfer_normal_rank));
  if (all || args.infinity) {
    std::printf("structural indices at infinity:");
    for (int d : rep.indices_at_inf) std::printf(" %d", d);
    std::printf("\n");
  }
  if (all || args.eigs) {
    if (!rep.square_regular) {
      std::printf(
          "finite eigenvalues: unsupported for this pencil (it is not both "
          "square and regular)\n");
    } else if (rep.finite_eigenvalues.empty()) {
      std::printf("finite eigenvalues: none\n");
    } else {
      std::printf("finite eigenvalues (value, multiplicity):\n");
      for (const auto& [z, mult] : rep.finite_eigenvalues) {
        std::printf("  %s  %d\n", format_complex(z).c_str(), mult);
      }
    }
  }
  if (all || args.audit) {
    std::printf("degree audit:\n");
    std::printf("  rank of the degree-one coefficient: %lld\n",
                static_cast<long long>(rep.audit.rank_l1));
    std::printf("  finite pole count:                  %lld\n",
                static_cast<long long>(rep.audit.finite_pole_count));
    std::printf("  polar degree at infinity:           %lld\n",
                static_cast<long long>(rep.audit.polar_degree_at_infinity));
    std::printf("  consistent: %s\n", rep.audit.consistent ? "yes" : "NO");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strongly minimal linearizations of rational matrices"};
  app.require_subcommand(1);

  LinearizeArgs lin;
  std::string lin_structure;
  double lin_tol = 0.0;
  std::int64_t lin_k = 0;
  std::uint64_t lin_seed = 0;
  CLI::App* linearize =
      app.add_subcommand("linearize", "build a certified degree-one pencil");
  linearize->add_option("-i,--input", lin.input, "problem JSON file")
      ->required();
  linearize->add_option("-o,--output", lin.output, "result JSON file")
      ->required();
  CLI::Option* opt_structure = linearize->add_option(
      "--structure", lin_structure, "structure tag override");
  CLI::Option* opt_tol = linearize->add_option(
      "--tol", lin_tol, "relative rank tolerance multiplier");
  CLI::Option* opt_k =
      linearize->add_option("--k", lin_k, "moment order for tail data");
  CLI::Option* opt_seed =
      linearize->add_option("--seed", lin_seed, "seed for randomized checks");
  linearize->add_flag("--strict", lin.strict,
                      "exit 3 when any rank diagnostic was flagged");

  std::string ver_result, ver_problem;
  CLI::App* verify =
      app.add_subcommand("verify", "re-check a stored result independently");
  verify->add_option("-r,--result", ver_result, "result JSON file")
      ->required();
  verify->add_option("-p,--problem", ver_problem, "problem JSON file")
      ->required();

  AnalyzeArgs ana;
  CLI::App* analyze =
      app.add_subcommand("analyze", "print the structural report of a result");
  analyze->add_option("-r,--result", ana.result_path, "result JSON file")
      ->required();
  analyze->add_flag("--infinity", ana.infinity,
                    "structural indices at infinity");
  analyze->add_flag("--eigs", ana.eigs, "finite eigenvalues");
  analyze->add_flag("--audit", ana.audit, "degree accounting");

  CLI11_PARSE(app, argc, argv);

  try {
    if (linearize->parsed()) {
      if (opt_structure->count() > 0) lin.structure = lin_structure;
      if (opt_tol->count() > 0) lin.tolerance = lin_tol;
      if (opt_k->count() > 0) {
        if (lin_k < 1) {
          std::fprintf(stderr, "error: --k must be at least one\n");
          return kExitBadInput;
        }
        lin.k = static_cast<Index>(lin_k);
      }
      if (opt_seed->count() > 0) lin.seed = lin_seed;
      return cmd_linearize(lin);
    }
    if (verify->parsed()) return cmd_verify(ver_result, ver_problem);
    if (analyze->parsed()) return cmd_analyze(ana);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitBadInput;
  }
  return kExitBadInput;
}
