#include <doctest.h>

#include "mtlrc/io_json.hpp"

#include <sstream>

using namespace mtlrc;

TEST_CASE("spectra and graph serialize with the fixed field names") {
  const TaskSpectra spectra = make_spectra({{0.5, 0.25}, {1.0}});
  const auto j = spectra_to_json(spectra);
  CHECK(j.contains("spectra"));
  const auto back = spectra_from_json(j);
  CHECK(back.tasks() == 2);
  CHECK(back.task(0)[1] == doctest::Approx(0.25));

  const auto parsed = spectra_from_json(Json::parse(R"({"spectra": [[0.9, 0.1], [0.4]]})"));
  CHECK(parsed.task(1)[0] == doctest::Approx(0.4));

  const auto doc = Json::parse(
      R"({"spectra": [[1.0]], "graph": {"weights": [[0.0, 1.0], [1.0, 0.0]], "eta": 1.0}})");
  const auto op = graph_from_json(doc);
  CHECK(op.d(0, 0) == doctest::Approx(2.0));
  CHECK(op.d_inv_diag[0] == doctest::Approx(2.0 / 3.0));
  const auto j2 = graph_to_json(op);
  CHECK(j2.at("graph").at("eta").get<double>() == doctest::Approx(1.0));
  CHECK(j2.at("graph").at("weights")[0][1].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("family and decay parsing") {
  const auto f = family_from_json(Json::parse(R"({"family": "schatten", "q": 1.0, "radius": 2.0})"));
  CHECK(f.kind == FamilyKind::SchattenNorm);
  CHECK(f.radius == doctest::Approx(2.0));
  CHECK_THROWS_AS(family_from_json(Json::parse(R"({"family": "spectral"})")),
                  std::invalid_argument);
  const auto d = decay_from_json(Json::parse(R"({"decay": {"d": [1.0, 2.0], "alpha": [2.0, 3.0]}})"));
  CHECK(d.tasks() == 2);
  const auto ds = decay_from_json(Json::parse(R"({"decay": {"d": 1.5, "alpha": 2.5}})"));
  CHECK(ds.tasks() == 1);
}

TEST_CASE("sample csv round trip") {
  MultiTaskSample s;
  Matrix x0(2, 3), x1(2, 3);
  x0 << 1, 2, 3, 4, 5, 6;
  x1 << -1, 0.5, 0.25, 2, -3, 1;
  Vector y0(2), y1(2);
  y0 << 0.1, -0.2;
  y1 << 7, 8;
  s.features = {x0, x1};
  s.labels = {y0, y1};

  std::ostringstream out;
  sample_to_csv(s, out);
  std::istringstream in(out.str());
  const auto back = sample_from_csv(in);
  CHECK(back.tasks() == 2);
  CHECK(back.samples() == 2);
  CHECK(back.dim() == 3);
  CHECK((back.features[1] - x1).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  CHECK((back.labels[0] - y0).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  std::istringstream bad("task,y\n0,1\n");
  CHECK_THROWS_AS(sample_from_csv(bad), std::invalid_argument);
}

TEST_CASE("config hash is stable and content sensitive") {
  const auto a = Json::parse(R"({"n": 100, "T": 2})");
  const auto b = Json::parse(R"({"n": 100, "T": 3})");
  CHECK(config_hash(a) == config_hash(a));
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("sweep config parses end to end") {
  const auto j = Json::parse(R"({
    "vary": "n",
    "grid": {"kind": "log", "from": 16, "to": 256, "points": 5},
    "base": {
      "family": "group", "q": 2.0, "radius": 1.0,
      "decay": {"d": 1.0, "alpha": 3.0},
      "n": 16, "T": 2, "kernel_bound": 1.0,
      "loss": {"L": 1.0, "b": 1.0, "B_prime": 1.0},
      "confidence": {"K": 2.0, "x": 1.0}
    },
    "outputs": ["grc_excess"]
  })");
  const auto cfg = sweep_config_from_json(j);
  CHECK(cfg.grid.points == 5);
  CHECK(cfg.outputs.size() == 1);
  const auto res = run_sweep(cfg);
  CHECK(res.rows.size() == 5);
}
