// qlim: Fisher-information scans and checks for linear-interferometer imaging.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qlim/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Optimal linear interferometers for incoherent point sources"};
  app.require_subcommand(1);

  qlim::Fig1Options fig1;
  std::string fig1_out = "fig1.csv", fig1_svg, fig1_config;
  std::optional<double> fig1_theta;
  double fig1_rtol = 0.0;
  auto* f = app.add_subcommand("fig1", "Scan Fisher information over the separation grid");
  f->add_option("--out", fig1_out, "CSV output path")->capture_default_str();
  f->add_option("--svg", fig1_svg, "Also write an SVG line plot");
  f->add_option("--config", fig1_config, "JSON scene file (defaults: two sources x=0,theta; u=0,1)");
  f->add_option("--points", fig1.grid.points, "Grid points")->capture_default_str();
  f->add_option("--theta-min", fig1.grid.theta_min, "Smallest theta*k/z0")->capture_default_str();
  f->add_option("--theta-max", fig1.grid.theta_max, "Largest theta*k/z0")->capture_default_str();
  f->add_option("--theta", fig1_theta, "Single separation theta*k/z0 (sets min and max)");
  f->add_option("--delta", fig1.settings.delta, "Parameter shift for purification pairs")
      ->capture_default_str();
  f->add_option("--rtol", fig1_rtol, "Relative rank tolerance (0 = max(m,n)*eps)");

  qlim::CounterexampleOptions cex;
  std::string cex_config, cex_out;
  double cex_rtol = 0.0;
  auto* c = app.add_subcommand("counterexample",
                               "Compare QR-based and optimal interferometers on symmetric and "
                               "asymmetric scenes");
  c->add_option("--config", cex_config, "JSON scene file for the asymmetric variant");
  c->add_option("--out", cex_out, "Also write the CSV report here");
  c->add_option("--theta", cex.theta_scaled, "Separation theta*k/z0")->capture_default_str();
  c->add_option("--delta", cex.delta, "Parameter shift")->capture_default_str();
  c->add_option("--rtol", cex_rtol, "Relative rank tolerance (0 = max(m,n)*eps)");

  qlim::SelfcheckOptions sc;
  std::uint64_t seed = sc.seed;
  double strict = 0.0;
  auto* s = app.add_subcommand("selfcheck", "Run the invariant suite on seeded random scenes");
  s->add_option("--seed", seed, "Corpus seed")->capture_default_str();
  s->add_option("--cases", sc.cases, "Random scenes")->capture_default_str();
  s->add_option("--strict", strict, "Replace every tolerance with this value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qlim::kExitUsage;
  }

  if (f->parsed()) {
    fig1.out = fig1_out;
    if (!fig1_svg.empty()) fig1.svg = fig1_svg;
    if (!fig1_config.empty()) fig1.config = fig1_config;
    if (fig1_theta) fig1.grid.theta_min = fig1.grid.theta_max = *fig1_theta;
    if (fig1_rtol > 0.0) fig1.settings.rtol = fig1_rtol;
    return qlim::cmd_fig1(fig1, std::cout, std::cerr);
  }
  if (c->parsed()) {
    if (!cex_config.empty()) cex.config = cex_config;
    if (!cex_out.empty()) cex.out = cex_out;
    if (cex_rtol > 0.0) cex.rtol = cex_rtol;
    return qlim::cmd_counterexample(cex, std::cout, std::cerr);
  }
  sc.seed = seed;
  if (s->count("--strict") > 0) sc.strict = strict;
  return qlim::cmd_selfcheck(sc, std::cout);
}
