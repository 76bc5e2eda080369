#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "tractorlab/errors.hpp"

using namespace tractorlab;
using namespace tractorlab::cli;

int main(int argc, char** argv) {
  CLI::App app{"Exact tractor calculus on conformally flat R^n"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--out", common.out, "Write the JSON report to PATH");
  app.add_option("--seed", common.seed, "Seed for randomized checks");
  app.add_flag("--timings", common.timings, "Add wall-clock timings to the report");

  int n = 0, rank = 2;
  std::optional<int> degree, rank_opt;
  std::string suite = "all", level = "full", mode = "ks", input, sigma;
  std::optional<std::string> sigma_opt;

  auto* verify = app.add_subcommand("verify", "Run the seeded verification suites");
  verify->add_option("--n", n, "Dimension")->required();
  verify->add_option("--suite", suite)->check(CLI::IsMember({"identities", "prolongation", "scales", "all"}));

  auto* basis = app.add_subcommand("ckt-basis", "Conformal Killing vector (rank 1) or tensor (rank 2) basis");
  basis->add_option("--n", n)->required();
  basis->add_option("--rank", rank)->check(CLI::IsMember({1, 2}));
  basis->add_option("--degree", degree, "Polynomial degree bound");

  auto* prolong = app.add_subcommand("prolong", "Half, full or Weyl-form prolongation of a field");
  prolong->add_option("input,--input", input, "WeightedTensorField JSON")->required();
  prolong->add_option("--level", level)->check(CLI::IsMember({"half", "full", "weyl"}));
  prolong->add_option("--sigma", sigma_opt, "Splitting scale for the half level");

  auto* check = app.add_subcommand("check-scale", "Killing scale tests");
  check->add_option("input,--input", input, "WeightedTensorField JSON")->required();
  check->add_option("--sigma", sigma, "PATH or inline polynomial")->required();
  check->add_option("--mode", mode)->check(CLI::IsMember({"sks", "ks", "einstein-ks"}));

  auto* edim = app.add_subcommand("einstein-dim", "Dimension of the Einstein-compatible subspace");
  edim->add_option("n,--n", n)->required();
  edim->add_option("sigma,--sigma", sigma)->required();

  auto* nk = app.add_subcommand("new-killing", "Killing field from a conformal Killing field and an Einstein scale");
  nk->add_option("input,--input", input)->required();
  nk->add_option("--sigma", sigma)->required();
  nk->add_option("--rank", rank_opt)->check(CLI::IsMember({1, 2}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*verify) return cmd_verify(common, n, suite);
    if (*basis) return cmd_ckt_basis(common, n, rank, degree);
    if (*prolong) return cmd_prolong(common, input, level, sigma_opt);
    if (*check) return cmd_check_scale(common, input, sigma, mode);
    if (*edim) return cmd_einstein_dim(common, n, sigma);
    if (*nk) return cmd_new_killing(common, input, sigma, rank_opt);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << '\n';
    return kUsage;
  } catch (const DimensionError& e) {
    std::cerr << "dimension error: " << e.what() << '\n';
    return kUsage;
  } catch (const SingularWeightError& e) {
    std::cerr << "singular weight: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return kCheckFailure;
  }
  return kUsage;
}
