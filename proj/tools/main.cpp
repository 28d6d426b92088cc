#include "mtlrc/empirical.hpp"
#include "mtlrc/fixed_point.hpp"
#include "mtlrc/graph.hpp"
#include "mtlrc/io_json.hpp"
#include "mtlrc/sweeps.hpp"
#include "mtlrc/train.hpp"
#include "mtlrc/validate.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using mtlrc::Json;

struct GlobalOpts {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string format = "json";
};

Json require_config(const GlobalOpts& opts) {
  if (opts.config_path.empty())
    throw std::runtime_error("--config <path.json> is required for this subcommand");
  return mtlrc::load_json_file(opts.config_path);
}

void emit(const GlobalOpts& opts, const std::string& payload) {
  if (opts.out_path.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(opts.out_path);
  if (!out) throw std::runtime_error("cannot open output file: " + opts.out_path);
  out << payload;
}

mtlrc::TaskSpectra spectra_from_config(const Json& cfg, std::size_t T) {
  if (cfg.contains("spectra")) return mtlrc::spectra_from_json(cfg);
  if (cfg.contains("decay")) {
    const auto decay = mtlrc::broadcast_decay(mtlrc::decay_from_json(cfg), T);
    const std::size_t length = cfg.value("spectrum_length", std::size_t{1024});
    return mtlrc::power_law_spectra(decay, length);
  }
  throw std::runtime_error("config needs either \"spectra\" or \"decay\"");
}

int cmd_bound(const GlobalOpts& opts) {
  const Json cfg = require_config(opts);
  const auto params = mtlrc::params_from_json(cfg);
  const auto family = mtlrc::family_from_json(cfg);
  const auto spectra = spectra_from_config(cfg, params.T);
  const std::string name = cfg.value("bound", "lrc");

  std::vector<double> rs;
  if (cfg.contains("r_grid")) {
    const Json& g = cfg.at("r_grid");
    rs = mtlrc::log_grid(g.at("from").get<double>(), g.at("to").get<double>(),
                         g.at("points").get<std::size_t>());
  } else {
    rs.push_back(cfg.value("r", 1.0));
  }

  const auto evaluate = [&](double r) -> mtlrc::BoundValue {
    if (name == "lrc") {
      switch (family.kind) {
        case mtlrc::FamilyKind::GroupNorm:
          return family.q <= 2.0
                     ? mtlrc::lrc_group(r, family.q, spectra, params, family.radius)
                     : mtlrc::lrc_group_high_q(r, family.q, spectra, params, family.radius);
        case mtlrc::FamilyKind::SchattenNorm:
          return mtlrc::lrc_schatten(r, family.q, spectra, params, family.radius);
        case mtlrc::FamilyKind::Graph:
          return mtlrc::lrc_graph(r, spectra, family.graph_op, params, family.radius);
      }
    }
    if (name == "grc") {
      switch (family.kind) {
        case mtlrc::FamilyKind::GroupNorm:
          return family.q <= 2.0
                     ? mtlrc::grc_group(family.q, spectra, params, family.radius)
                     : mtlrc::grc_group_high_q(family.q, spectra, params, family.radius);
        case mtlrc::FamilyKind::SchattenNorm:
          return mtlrc::grc_schatten(family.q, spectra, params, family.radius);
        case mtlrc::FamilyKind::Graph:
          return mtlrc::grc_graph(spectra, family.graph_op, params, family.radius);
      }
    }
    if (name == "lrc_lower") {
      const auto lb = mtlrc::lrc_lower_group(r, family.q, spectra, params, family.radius,
                                             cfg.value("c", 1.0));
      mtlrc::BoundValue bv;
      bv.value = lb.value;
      bv.a2 = lb.value;
      return bv;
    }
    throw std::runtime_error("unknown bound name '" + name + "' (use lrc|grc|lrc_lower)");
  };

  const std::string hash = mtlrc::config_hash(cfg);
  if (opts.format == "csv") {
    std::string csv = "config_hash,family,q,r,value,a1,a2,additive\n";
    for (double r : rs) {
      const auto bv = evaluate(r);
      csv += hash + ',' + mtlrc::to_string(family.kind) + ',' + mtlrc::format_number(family.q) +
             ',' + mtlrc::format_number(r) + ',' + mtlrc::format_number(bv.value) + ',' +
             mtlrc::format_number(bv.a1) + ',' + mtlrc::format_number(bv.a2) + ',' +
             mtlrc::format_number(bv.additive) + '\n';
    }
    emit(opts, csv);
  } else {
    Json rows = Json::array();
    for (double r : rs) {
      const auto bv = evaluate(r);
      rows.push_back({{"config_hash", hash},
                      {"family", mtlrc::to_string(family.kind)},
                      {"q", family.q},
                      {"r", r},
                      {"value", bv.value},
                      {"a1", bv.a1},
                      {"a2", bv.a2},
                      {"additive", bv.additive}});
    }
    emit(opts, rows.dump(2));
  }
  return 0;
}

int cmd_fixed_point(const GlobalOpts& opts) {
  const Json cfg = require_config(opts);
  const auto params = mtlrc::params_from_json(cfg);
  const auto family = mtlrc::family_from_json(cfg);
  const auto loss = mtlrc::loss_from_json(cfg);
  const auto conf = mtlrc::confidence_from_json(cfg);

  double r_star = 0.0;
  std::string method;
  double residual = 0.0;
  if (cfg.value("method", "closed_form") == "closed_form") {
    method = "closed_form";
    if (cfg.contains("decay") && !cfg.contains("spectra"))
      r_star = mtlrc::fixed_point_bound(
          family, mtlrc::broadcast_decay(mtlrc::decay_from_json(cfg), params.T), params, loss);
    else
      r_star = mtlrc::fixed_point_bound(family, spectra_from_config(cfg, params.T), params, loss);
  } else {
    method = "bisection";
    const auto spectra = spectra_from_config(cfg, params.T);
    auto lrc = [&](double r) -> double {
      switch (family.kind) {
        case mtlrc::FamilyKind::GroupNorm:
          return family.q <= 2.0
                     ? mtlrc::lrc_group(r, family.q, spectra, params, family.radius).value
                     : mtlrc::lrc_group_high_q(r, family.q, spectra, params, family.radius).value;
        case mtlrc::FamilyKind::SchattenNorm:
          return mtlrc::lrc_schatten(r, family.q, spectra, params, family.radius).value;
        case mtlrc::FamilyKind::Graph:
          return mtlrc::lrc_graph(r, spectra, family.graph_op, params, family.radius).value;
      }
      return 0.0;
    };
    const auto psi = mtlrc::make_excess_subroot(lrc, loss);
    const auto res = mtlrc::solve_fixed_point(psi, cfg.value("tol", 1e-10));
    r_star = res.r_star;
    residual = res.residual;
  }

  const double excess = mtlrc::excess_risk_dist(r_star, loss, conf, params, true);
  Json out = {{"r_star", r_star},
              {"method", method},
              {"residual", residual},
              {"excess_risk", excess},
              {"confidence", 1.0 - std::exp(-conf.x)}};
  emit(opts, out.dump(2));
  return 0;
}

int cmd_empirical(const GlobalOpts& opts) {
  const Json cfg = require_config(opts);
  const auto family = mtlrc::family_from_json(cfg);
  const std::size_t draws = cfg.value("draws", std::size_t{2000});

  mtlrc::MultiTaskSample sample;
  if (cfg.contains("sample_csv")) {
    std::ifstream in(cfg.at("sample_csv").get<std::string>());
    if (!in) throw std::runtime_error("cannot open sample csv");
    sample = mtlrc::sample_from_csv(in);
  } else {
    mtlrc::SyntheticTaskConfig scfg;
    scfg.T = cfg.value("T", std::size_t{2});
    scfg.n = cfg.value("n", std::size_t{50});
    scfg.p = cfg.value("p", std::size_t{5});
    scfg.noise_std = cfg.value("noise_std", 0.1);
    sample = mtlrc::generate_tasks(scfg, family, opts.seed).sample;
  }

  Json out;
  if (cfg.contains("r")) {
    const auto est =
        mtlrc::empirical_local_rc(sample, family, cfg.at("r").get<double>(), draws, opts.seed);
    out = {{"estimate", est.estimate},
           {"std_error", est.std_error},
           {"draws", est.draws},
           {"seed", opts.seed},
           {"converged", est.converged}};
  } else {
    const auto est = mtlrc::empirical_grc(sample, family, draws, opts.seed);
    out = {{"estimate", est.estimate},
           {"std_error", est.std_error},
           {"draws", est.draws},
           {"seed", opts.seed}};
  }
  emit(opts, out.dump(2));
  return 0;
}

int cmd_train(const GlobalOpts& opts) {
  const Json cfg = require_config(opts);
  const auto family = mtlrc::family_from_json(cfg);
  mtlrc::SyntheticTaskConfig scfg;
  scfg.T = cfg.value("T", std::size_t{4});
  scfg.n = cfg.value("n", std::size_t{100});
  scfg.p = cfg.value("p", std::size_t{10});
  scfg.noise_std = cfg.value("noise_std", 0.0);
  scfg.clip = cfg.value("clip", false);
  const std::string structure = cfg.value("structure", "shared_low_rank");
  if (structure == "shared_low_rank")
    scfg.structure = mtlrc::TaskStructure::SharedLowRank;
  else if (structure == "group_sparse")
    scfg.structure = mtlrc::TaskStructure::GroupSparse;
  else if (structure == "graph_smooth")
    scfg.structure = mtlrc::TaskStructure::GraphSmooth;
  else
    throw std::runtime_error("unknown structure '" + structure + "'");
  scfg.structure_size = cfg.value("structure_size", std::size_t{1});

  const auto gen = mtlrc::generate_tasks(scfg, family, opts.seed);
  const auto model = mtlrc::train_frank_wolfe(
      gen.sample, family, cfg.value("iters", std::size_t{2000}), cfg.value("tol", 1e-6));
  const auto report = mtlrc::risk_report(model, gen.handle);

  Json out = {{"seed", opts.seed},
              {"iterations", model.iterations},
              {"duality_gap", model.final_gap},
              {"empirical_loss", report.empirical_loss},
              {"population_loss", report.population_loss},
              {"excess", report.excess}};
  if (cfg.contains("weights_out")) {
    std::ofstream wout(cfg.at("weights_out").get<std::string>());
    if (!wout) throw std::runtime_error("cannot open weights output file");
    for (Eigen::Index i = 0; i < model.weights.w.rows(); ++i) {
      for (Eigen::Index j = 0; j < model.weights.w.cols(); ++j) {
        if (j) wout << ',';
        wout << mtlrc::format_number(model.weights.w(i, j));
      }
      wout << '\n';
    }
    out["weights_out"] = cfg.at("weights_out");
  }
  emit(opts, out.dump(2));
  return 0;
}

int cmd_sweep(const GlobalOpts& opts) {
  const Json cfg = require_config(opts);
  const auto res = mtlrc::run_sweep(mtlrc::sweep_config_from_json(cfg));
  if (opts.format == "csv") {
    std::string payload = res.csv();
    payload += "# slopes";
    for (const auto& [name, slope] : res.slopes)
      payload += ' ' + name + '=' + mtlrc::format_number(slope);
    payload += '\n';
    emit(opts, payload);
  } else {
    Json out = {{"csv", res.csv()}, {"slopes", res.slopes}};
    emit(opts, out.dump(2));
  }
  return 0;
}

int cmd_compare_trace(const GlobalOpts& opts) {
  const Json cfg = require_config(opts);
  const auto res = mtlrc::run_comparison_trace(mtlrc::trace_comparison_from_json(cfg));
  Json out = {{"csv", res.csv()}, {"slopes", res.slopes}};
  emit(opts, opts.format == "csv" ? res.csv() : out.dump(2));
  return 0;
}

int cmd_compare_graph(const GlobalOpts& opts) {
  const Json cfg = require_config(opts);
  const auto res = mtlrc::run_comparison_graph(mtlrc::graph_comparison_from_json(cfg));
  Json out = {{"csv", res.csv()}, {"slopes", res.slopes}};
  emit(opts, opts.format == "csv" ? res.csv() : out.dump(2));
  return 0;
}

int cmd_talagrand(const GlobalOpts& opts) {
  const Json cfg = require_config(opts);
  mtlrc::TalagrandConfig tcfg;
  tcfg.class_size = cfg.value("class_size", std::size_t{50});
  tcfg.T = cfg.value("T", std::size_t{3});
  tcfg.n = cfg.value("n", std::size_t{20});
  tcfg.p = cfg.value("p", std::size_t{4});
  tcfg.x = cfg.value("x", 1.0);
  tcfg.redraws = cfg.value("redraws", std::size_t{10000});
  tcfg.rc_draws = cfg.value("rc_draws", std::size_t{4000});
  tcfg.seed = opts.seed;
  if (cfg.contains("family")) tcfg.family = mtlrc::family_from_json(cfg);
  const auto rep = mtlrc::talagrand_experiment(tcfg);
  Json out = {{"violation_frequency", rep.violation_frequency},
              {"violations", rep.violations},
              {"redraws", rep.redraws},
              {"target", rep.target},
              {"binomial_std_error", rep.binomial_std_error},
              {"rademacher", rep.rhs_rademacher},
              {"variance_radius", rep.variance_radius},
              {"range_bound", rep.range_bound},
              {"seed", opts.seed}};
  emit(opts, out.dump(2));
  return 0;
}

int cmd_validate(const GlobalOpts& opts) {
  const auto results = mtlrc::run_validation(opts.seed, std::cout);
  return mtlrc::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analytic and empirical Rademacher-complexity bounds for multi-task learning"};
  app.require_subcommand(1);

  GlobalOpts opts;
  app.add_option("--config", opts.config_path, "JSON configuration file")->expected(1);
  app.add_option("--seed", opts.seed, "RNG seed");
  app.add_option("--out", opts.out_path, "output file (stdout when omitted)");
  app.add_option("--format", opts.format, "output format")->check(CLI::IsMember({"csv", "json"}));

  int rc = 0;
  const auto wire = [&](const char* name, const char* desc, int (*fn)(const GlobalOpts&)) {
    auto* sub = app.add_subcommand(name, desc);
    sub->fallthrough();  // global flags may follow the subcommand
    sub->callback([&opts, fn, &rc] { rc = fn(opts); });
  };
  wire("bound", "evaluate an analytic LRC/GRC bound", cmd_bound);
  wire("fixed-point", "solve or bound the sub-root fixed point", cmd_fixed_point);
  wire("empirical", "Monte Carlo Rademacher complexity estimation", cmd_empirical);
  wire("train", "constrained ERM via Frank-Wolfe on synthetic tasks", cmd_train);
  wire("sweep", "evaluate bounds over a parameter grid with slope fits", cmd_sweep);
  wire("compare-trace", "trace-norm bound comparison curves", cmd_compare_trace);
  wire("compare-graph", "graph-regularizer bound comparison curves", cmd_compare_graph);
  wire("talagrand", "concentration-inequality violation experiment", cmd_talagrand);
  wire("validate", "run the end-to-end validation suite", cmd_validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return rc;
}
