#include "sqg/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sqg::io {
namespace {

using nlohmann::json;

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Vector vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) fail(ErrorCode::ParseError, std::string(what) + " must be an array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(ErrorCode::ParseError, std::string(what) + " entries must be numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    fail(ErrorCode::ParseError, std::string(what) + " must be a non-empty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  Matrix m;
  for (std::size_t i = 0; i < rows; ++i) {
    const Vector row = vector_from_json(j[i], what);
    if (i == 0) {
      cols = static_cast<std::size_t>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<std::size_t>(row.size()) != cols) {
      fail(ErrorCode::ParseError, std::string(what) + " rows have unequal lengths");
    }
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::ParseError, "invalid JSON");
  return j;
}

std::string dump(const json& j, int indent) {
  return indent < 0 ? j.dump() : j.dump(indent);
}

json cloud_to_json_value(const ShapeCloud& cloud) {
  json points = json::array();
  for (const ShapePoint& p : cloud.points) points.push_back(vector_to_json(p.coords));
  return json{{"k", cloud.k},
              {"points", std::move(points)},
              {"meta",
               {{"strategy", cloud.meta.strategy},
                {"budget", cloud.meta.budget},
                {"seed", cloud.meta.seed},
                {"source", cloud.meta.source},
                {"uniform", cloud.meta.uniform}}}};
}

}  // namespace

std::string to_json(const SquareGraphon& g, int indent) {
  const json j{{"n", g.n()},
               {"pi", vector_to_json(g.pi().weights())},
               {"mu", matrix_to_json(g.mu().weights())}};
  return dump(j, indent);
}

std::string to_json(const MarkovKernel& kappa, int indent) {
  json j{{"from", kappa.source_size()},
         {"to", kappa.target_size()},
         {"rows", matrix_to_json(kappa.rows())}};
  if (kappa.target_shape().size() > 1) j["shape"] = kappa.target_shape();
  return dump(j, indent);
}

std::string to_json(const ShapeCloud& cloud, int indent) {
  return dump(cloud_to_json_value(cloud), indent);
}

std::string to_json(const ConvergenceReport& report, int indent) {
  const json j{{"ks", report.ks},
               {"successive_distances", report.successive_distances},
               {"cauchy_residuals", report.cauchy_residuals}};
  return dump(j, indent);
}

std::string to_json(const MorphismReport& report, int indent) {
  const json j{{"vertex_residual", report.vertex_residual},
               {"edge_residual", report.edge_residual},
               {"tol", report.tol},
               {"is_morphism", report.is_morphism}};
  return dump(j, indent);
}

std::string to_json(const RebalanceResult& result, int indent) {
  json steps = json::array();
  for (const RebalanceStep& step : result.trace.steps)
    steps.push_back(json{{"m1", step.m1}, {"m2", step.m2}, {"beta0", step.beta0}});
  const json j{{"kernel", parse(to_json(result.kernel))},
               {"trace", {{"initial_d", result.trace.initial_d}, {"steps", std::move(steps)}}}};
  return dump(j, indent);
}

std::string to_json(const LimitCandidate& candidate, int indent) {
  const json j{{"dims", candidate.index.dims()},
               {"graphon", parse(to_json(candidate.graphon))},
               {"residuals",
                {{"per_dim_vertex", candidate.per_dim_vertex_residual},
                 {"per_dim_edge", candidate.per_dim_edge_residual},
                 {"full_vertex", candidate.full_vertex_residual},
                 {"full_edge", candidate.full_edge_residual},
                 {"consistency", candidate.consistency_residual}}},
               {"consistent", candidate.consistent},
               {"note", candidate.note}};
  return dump(j, indent);
}

std::string to_json(const LimitValidationReport& report, int indent) {
  json per_k = json::array();
  for (const LimitValidationEntry& entry : report.per_k)
    per_k.push_back(json{{"k", entry.k},
                         {"candidate_distance", entry.candidate_distance},
                         {"tail_residual", entry.tail_residual},
                         {"pass", entry.pass}});
  const json j{{"per_k", std::move(per_k)}, {"pass", report.pass}};
  return dump(j, indent);
}

SquareGraphon graphon_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("pi") || !j.contains("mu"))
    fail(ErrorCode::ParseError, "graphon JSON needs \"pi\" and \"mu\"");
  Vector pi = vector_from_json(j["pi"], "pi");
  Matrix mu = matrix_from_json(j["mu"], "mu");
  if (j.contains("n") && j["n"].get<Eigen::Index>() != pi.size())
    fail(ErrorCode::ParseError, "declared n does not match the vertex vector");
  return new_square_graphon(std::move(pi), std::move(mu));
}

MarkovKernel kernel_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("rows")) fail(ErrorCode::ParseError, "kernel JSON needs \"rows\"");
  Matrix rows = matrix_from_json(j["rows"], "rows");
  if (j.contains("from") && j["from"].get<Eigen::Index>() != rows.rows())
    fail(ErrorCode::ParseError, "declared source size does not match the rows");
  if (j.contains("to") && j["to"].get<Eigen::Index>() != rows.cols())
    fail(ErrorCode::ParseError, "declared target size does not match the rows");
  if (j.contains("shape")) {
    std::vector<Eigen::Index> shape = j["shape"].get<std::vector<Eigen::Index>>();
    return MarkovKernel(std::move(rows), std::move(shape));
  }
  return MarkovKernel(std::move(rows));
}

ShapeCloud cloud_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("k") || !j.contains("points"))
    fail(ErrorCode::ParseError, "cloud JSON needs \"k\" and \"points\"");
  ShapeCloud cloud;
  cloud.k = j["k"].get<Eigen::Index>();
  for (const json& p : j["points"]) {
    Vector coords = vector_from_json(p, "point");
    if (coords.size() != cloud.k + cloud.k * cloud.k)
      fail(ErrorCode::ParseError, "point length does not match k + k^2");
    cloud.points.push_back(ShapePoint{cloud.k, std::move(coords)});
  }
  if (cloud.points.empty()) fail(ErrorCode::ParseError, "cloud has no points");
  if (j.contains("meta")) {
    const json& m = j["meta"];
    cloud.meta.strategy = m.value("strategy", "");
    cloud.meta.budget = m.value("budget", 0LL);
    cloud.meta.seed = m.value("seed", 0ULL);
    cloud.meta.source = m.value("source", "");
    cloud.meta.uniform = m.value("uniform", false);
  }
  return cloud;
}

std::string to_csv(const ShapeCloud& cloud) {
  std::ostringstream out;
  out.precision(17);
  const Eigen::Index k = cloud.k;
  for (Eigen::Index i = 0; i < k; ++i) out << (i ? "," : "") << "rho_" << i;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) out << ",nu_" << i << "_" << j;
  out << "\n";
  for (const ShapePoint& p : cloud.points) {
    for (Eigen::Index c = 0; c < p.coords.size(); ++c) out << (c ? "," : "") << p.coords[c];
    out << "\n";
  }
  return out.str();
}

SquareGraphon load_graphon(const std::string& path) { return graphon_from_json(read_text(path)); }

MarkovKernel load_kernel(const std::string& path) { return kernel_from_json(read_text(path)); }

ShapeCloud load_cloud(const std::string& path) { return cloud_from_json(read_text(path)); }

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << text;
  if (!out) fail(ErrorCode::IoError, "failed writing " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string error_json(ErrorCode code, const std::string& message) {
  const json j{{"code", std::string(to_string(code))}, {"message", message}};
  return j.dump();
}

}  // namespace sqg::io
