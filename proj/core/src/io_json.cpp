#include "mtlrc/io_json.hpp"

#include "mtlrc/graph.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace mtlrc {

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::GroupNorm: return "group";
    case FamilyKind::SchattenNorm: return "schatten";
    case FamilyKind::Graph: return "graph";
  }
  return "group";
}

FamilyKind family_kind_from_string(const std::string& name) {
  if (name == "group") return FamilyKind::GroupNorm;
  if (name == "schatten") return FamilyKind::SchattenNorm;
  if (name == "graph") return FamilyKind::Graph;
  throw std::invalid_argument("unknown family kind '" + name + "'");
}

Json spectra_to_json(const TaskSpectra& spectra) {
  Json j;
  j["spectra"] = spectra.all();
  return j;
}

TaskSpectra spectra_from_json(const Json& j) {
  return TaskSpectra(j.at("spectra").get<std::vector<std::vector<double>>>());
}

Json graph_to_json(const GraphOperator& op) {
  const auto T = op.edge_weights.rows();
  std::vector<std::vector<double>> weights(static_cast<std::size_t>(T));
  for (Eigen::Index i = 0; i < T; ++i) {
    weights[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(T));
    for (Eigen::Index k = 0; k < T; ++k)
      weights[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = op.edge_weights(i, k);
  }
  Json j;
  j["graph"] = {{"weights", weights}, {"eta", op.eta}};
  return j;
}

GraphOperator graph_from_json(const Json& j) {
  const Json& g = j.contains("graph") ? j.at("graph") : j;
  const auto weights = g.at("weights").get<std::vector<std::vector<double>>>();
  const auto T = static_cast<Eigen::Index>(weights.size());
  Matrix w(T, T);
  for (Eigen::Index i = 0; i < T; ++i) {
    if (static_cast<Eigen::Index>(weights[static_cast<std::size_t>(i)].size()) != T)
      throw std::invalid_argument("graph weights must be square");
    for (Eigen::Index k = 0; k < T; ++k)
      w(i, k) = weights[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  }
  return build_graph_operator(w, g.at("eta").get<double>());
}

ProblemParams params_from_json(const Json& j) {
  return ProblemParams(j.at("n").get<std::size_t>(), j.at("T").get<std::size_t>(),
                       j.value("kernel_bound", 1.0));
}

LossSpec loss_from_json(const Json& j) {
  if (!j.contains("loss")) return LossSpec(1.0, 1.0, 1.0);
  const Json& l = j.at("loss");
  return LossSpec(l.value("L", 1.0), l.value("b", 1.0), l.value("B_prime", 1.0));
}

ConfidenceParams confidence_from_json(const Json& j) {
  if (!j.contains("confidence")) return ConfidenceParams(2.0, 1.0);
  const Json& c = j.at("confidence");
  return ConfidenceParams(c.value("K", 2.0), c.value("x", 1.0));
}

HypothesisFamily family_from_json(const Json& j) {
  const auto kind = family_kind_from_string(j.value("family", "group"));
  const double radius = j.value("radius", 1.0);
  switch (kind) {
    case FamilyKind::GroupNorm:
      return HypothesisFamily::group(j.value("q", 2.0), radius);
    case FamilyKind::SchattenNorm:
      return HypothesisFamily::schatten(j.value("q", 2.0), radius);
    case FamilyKind::Graph:
      return HypothesisFamily::graph(graph_from_json(j), radius);
  }
  throw std::invalid_argument("family_from_json: unreachable");
}

PowerLawDecay decay_from_json(const Json& j) {
  const Json& d = j.at("decay");
  auto as_vector = [](const Json& v) -> std::vector<double> {
    if (v.is_array()) return v.get<std::vector<double>>();
    return {v.get<double>()};
  };
  return PowerLawDecay(as_vector(d.at("d")), as_vector(d.at("alpha")));
}

namespace {

SweepVariable vary_from_string(const std::string& s) {
  if (s == "n") return SweepVariable::N;
  if (s == "T") return SweepVariable::T;
  if (s == "r") return SweepVariable::R;
  if (s == "radius") return SweepVariable::Radius;
  throw std::invalid_argument("sweep vary must be one of n|T|r|radius");
}

SweepGrid grid_from_json(const Json& j) {
  const Json& g = j.at("grid");
  SweepGrid grid;
  grid.log_spaced = g.value("kind", "log") == "log";
  grid.from = g.at("from").get<double>();
  grid.to = g.at("to").get<double>();
  grid.points = g.at("points").get<std::size_t>();
  return grid;
}

ExperimentBase base_from_json(const Json& j) {
  ExperimentBase base;
  base.family = family_from_json(j);
  base.decay = decay_from_json(j);
  base.params = params_from_json(j);
  base.loss = loss_from_json(j);
  base.conf = confidence_from_json(j);
  base.r = j.value("r", 1.0);
  return base;
}

}  // namespace

SweepConfig sweep_config_from_json(const Json& j) {
  SweepConfig cfg;
  cfg.vary = vary_from_string(j.value("vary", "n"));
  cfg.grid = grid_from_json(j);
  cfg.base = base_from_json(j.at("base"));
  cfg.outputs = j.at("outputs").get<std::vector<std::string>>();
  return cfg;
}

TraceComparisonConfig trace_comparison_from_json(const Json& j) {
  TraceComparisonConfig cfg;
  cfg.grid = grid_from_json(j);
  cfg.rank = j.value("rank", 1.0);
  cfg.lambda_max = j.value("lambda_max", 1.0);
  cfg.radius = j.value("radius", 1.0);
  cfg.decay = decay_from_json(j);
  cfg.params = params_from_json(j);
  cfg.loss = loss_from_json(j);
  cfg.conf = confidence_from_json(j);
  return cfg;
}

GraphComparisonConfig graph_comparison_from_json(const Json& j) {
  GraphComparisonConfig cfg;
  cfg.vary = vary_from_string(j.value("vary", "n"));
  cfg.grid = grid_from_json(j);
  cfg.graph_kind = j.value("graph_kind", "none");
  cfg.graph_weight = j.value("graph_weight", 1.0);
  cfg.eta = j.value("eta", 1.0);
  if (j.contains("graph"))
    cfg.graph_op = graph_from_json(j);
  else if (cfg.vary == SweepVariable::N) {
    Matrix w = Matrix::Zero(static_cast<Eigen::Index>(j.at("T").get<std::size_t>()),
                            static_cast<Eigen::Index>(j.at("T").get<std::size_t>()));
    cfg.graph_op = build_graph_operator(w, cfg.eta);
  }
  cfg.rank = j.value("rank", 1.0);
  cfg.lambda_max = j.value("lambda_max", 1.0);
  cfg.radius = j.value("radius", 1.0);
  cfg.decay = decay_from_json(j);
  cfg.params = params_from_json(j);
  cfg.loss = loss_from_json(j);
  cfg.conf = confidence_from_json(j);
  return cfg;
}

std::string config_hash(const Json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

MultiTaskSample sample_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("sample_from_csv: empty input");
  std::size_t columns = 1;
  for (char c : line) columns += c == ',';
  if (columns < 3) throw std::invalid_argument("sample_from_csv: header task,y,x1..xp expected");
  const std::size_t p = columns - 2;

  std::map<long, std::vector<std::pair<double, Vector>>> per_task;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    if (!std::getline(row, cell, ',')) continue;
    const long task = std::stol(cell);
    if (!std::getline(row, cell, ',')) throw std::invalid_argument("sample_from_csv: missing y");
    const double y = std::stod(cell);
    Vector x(static_cast<Eigen::Index>(p));
    for (std::size_t c = 0; c < p; ++c) {
      if (!std::getline(row, cell, ','))
        throw std::invalid_argument("sample_from_csv: missing feature column");
      x(static_cast<Eigen::Index>(c)) = std::stod(cell);
    }
    per_task[task].push_back({y, std::move(x)});
  }
  if (per_task.empty()) throw std::invalid_argument("sample_from_csv: no rows");
  const std::size_t n = per_task.begin()->second.size();
  MultiTaskSample sample;
  for (const auto& [task, rows] : per_task) {
    if (rows.size() != n)
      throw std::invalid_argument("sample_from_csv: tasks must share the sample count");
    Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    Vector y(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      y(static_cast<Eigen::Index>(i)) = rows[i].first;
      x.row(static_cast<Eigen::Index>(i)) = rows[i].second.transpose();
    }
    sample.features.push_back(std::move(x));
    sample.labels.push_back(std::move(y));
  }
  sample.validate();
  return sample;
}

void sample_to_csv(const MultiTaskSample& sample, std::ostream& out) {
  sample.validate();
  out << "task,y";
  for (std::size_t c = 1; c <= sample.dim(); ++c) out << ",x" << c;
  out << '\n';
  for (std::size_t t = 0; t < sample.tasks(); ++t)
    for (std::size_t i = 0; i < sample.samples(); ++i) {
      out << t << ',' << format_number(sample.labels[t](static_cast<Eigen::Index>(i)));
      for (std::size_t c = 0; c < sample.dim(); ++c)
        out << ','
            << format_number(sample.features[t](static_cast<Eigen::Index>(i),
                                                static_cast<Eigen::Index>(c)));
      out << '\n';
    }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  Json j;
  in >> j;
  return j;
}

}  // namespace mtlrc
