#include "roofkit/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "roofkit/errors.hpp"

namespace roofkit {

using nlohmann::json;

namespace {

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex parse_complex(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::ParseError, "expected a [re, im] pair, got " + j.dump());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json dims_json(std::size_t flat, std::optional<Dims> dims) {
  if (dims) return json::array({dims->a, dims->b});
  return json::array({flat});
}

json pure_json(const PureState& psi, std::optional<Dims> dims) {
  json data = json::array();
  for (const Complex& z : psi.view()) data.push_back(complex_json(z));
  return {{"kind", "pure"}, {"dims", dims_json(psi.dim(), dims)}, {"data", std::move(data)}};
}

json density_json(const DensityMatrix& rho, std::optional<Dims> dims) {
  json data = json::array();
  const auto n = static_cast<Eigen::Index>(rho.dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < n; ++j) row.push_back(complex_json(rho(i, j)));
    data.push_back(std::move(row));
  }
  return {{"kind", "density"}, {"dims", dims_json(rho.dim(), dims)}, {"data", std::move(data)}};
}

StateFile state_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "state must be a JSON object");
  for (const char* key : {"kind", "dims", "data"}) {
    if (!j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing key '") + key + "'");
  }
  const json& dims_j = j.at("dims");
  if (!dims_j.is_array() || dims_j.empty() || dims_j.size() > 2) {
    throw Error(ErrorCode::ParseError, "dims must be [n] or [nA, nB]");
  }
  std::size_t flat = 1;
  for (const auto& d : dims_j) {
    if (!d.is_number_integer() || d.get<long long>() < 1) {
      throw Error(ErrorCode::ParseError, "dims entries must be positive integers");
    }
    flat *= d.get<std::size_t>();
  }
  std::optional<Dims> dims;
  if (dims_j.size() == 2) dims = Dims{dims_j[0].get<std::size_t>(), dims_j[1].get<std::size_t>()};

  const json& data = j.at("data");
  if (!data.is_array()) throw Error(ErrorCode::ParseError, "data must be an array");
  const std::string kind = j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
  const auto n = static_cast<Eigen::Index>(flat);
  if (kind == "pure") {
    if (data.size() != flat) {
      throw Error(ErrorCode::ParseError, "pure data has " + std::to_string(data.size()) +
                                             " entries, dims imply " + std::to_string(flat));
    }
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = parse_complex(data[static_cast<std::size_t>(i)]);
    return StateFile{PureState(std::move(v)), dims};
  }
  if (kind == "density") {
    if (data.size() != flat) {
      throw Error(ErrorCode::NotSquare, "density data has " + std::to_string(data.size()) +
                                            " rows, dims imply " + std::to_string(flat));
    }
    ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const json& row = data[static_cast<std::size_t>(i)];
      if (!row.is_array() || row.size() != flat) {
        throw Error(ErrorCode::NotSquare, "density row " + std::to_string(i) + " has the wrong length");
      }
      for (Eigen::Index k = 0; k < n; ++k) m(i, k) = parse_complex(row[static_cast<std::size_t>(k)]);
    }
    return StateFile{DensityMatrix::validate(m), dims};
  }
  throw Error(ErrorCode::ParseError, "kind must be \"density\" or \"pure\"");
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace

DensityMatrix StateFile::density() const {
  if (const auto* psi = std::get_if<PureState>(&state)) return DensityMatrix::from_pure(*psi);
  return std::get<DensityMatrix>(state);
}

BipartiteState StateFile::bipartite() const {
  if (!dims) throw Error(ErrorCode::PreconditionFailed, "state file has no bipartite dims [nA, nB]");
  if (const auto* psi = std::get_if<PureState>(&state)) return BipartiteState(*dims, *psi);
  return BipartiteState(*dims, std::get<DensityMatrix>(state));
}

StateFile parse_state(const std::string& text) { return state_from_json(parse_json(text)); }

StateFile read_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_state(buffer.str());
}

std::string state_to_json(const PureState& psi, std::optional<Dims> dims) {
  return pure_json(psi, dims).dump(2);
}

std::string state_to_json(const DensityMatrix& rho, std::optional<Dims> dims) {
  return density_json(rho, dims).dump(2);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  out << text << '\n';
}

namespace {

json members_json(const Ensemble& ensemble, std::optional<Dims> dims) {
  json members = json::array();
  for (const auto& m : ensemble.members()) {
    members.push_back({{"weight", m.weight}, {"state", pure_json(m.state, dims)}});
  }
  return members;
}

}  // namespace

std::string ensemble_to_json(const Ensemble& ensemble, std::optional<Dims> dims) {
  json j{{"target", density_json(ensemble.target(), dims)}, {"members", members_json(ensemble, dims)}};
  return j.dump(2);
}

Ensemble parse_ensemble(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object() || !j.contains("target") || !j.contains("members") ||
      !j.at("members").is_array()) {
    throw Error(ErrorCode::ParseError, "ensemble needs 'target' and a 'members' array");
  }
  const StateFile target = state_from_json(j.at("target"));
  std::vector<EnsembleMember> members;
  for (const auto& m : j.at("members")) {
    if (!m.is_object() || !m.contains("weight") || !m.at("weight").is_number() ||
        !m.contains("state")) {
      throw Error(ErrorCode::ParseError, "ensemble member needs 'weight' and 'state'");
    }
    const StateFile s = state_from_json(m.at("state"));
    if (!s.is_pure()) throw Error(ErrorCode::ParseError, "ensemble members must be pure states");
    members.push_back({m.at("weight").get<double>(), std::get<PureState>(s.state)});
  }
  return Ensemble(target.density(), std::move(members));
}

std::string certificate_to_json(const Certificate& cert, std::optional<Dims> dims) {
  json j{{"verdict", std::string(to_string(cert.verdict))},
         {"reason", std::string(to_string(cert.reason))},
         {"residual", cert.residual},
         {"detail", cert.detail}};
  j["witness"] = cert.witness ? members_json(*cert.witness, dims) : json(nullptr);
  return j.dump(2);
}

}  // namespace roofkit
