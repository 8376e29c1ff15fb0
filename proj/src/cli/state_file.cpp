#include "privsq/state_file.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace privsq {

using nlohmann::json;

namespace {

std::string describe(const std::string& source, std::optional<std::size_t> offset, const std::string& problem) {
  std::string msg = source;
  if (offset) msg += ": byte " + std::to_string(*offset);
  return msg + ": " + problem;
}

}  // namespace

StateFileError::StateFileError(std::string source, std::optional<std::size_t> offset, std::string problem)
    : std::runtime_error(describe(source, offset, problem)),
      source_(std::move(source)),
      offset_(offset),
      problem_(std::move(problem)) {}

std::string format_state(const DensityOperator& rho) {
  json layout = json::array();
  for (const auto& s : rho.layout().systems()) layout.push_back({{"label", s.label}, {"dim", s.dim}});
  const Matrix& m = rho.matrix();
  std::vector<double> re, im;
  re.reserve(static_cast<std::size_t>(m.size()));
  im.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  json doc = {{"format", kStateFormat}, {"version", kStateFormatVersion}, {"layout", layout}, {"real", re}, {"imag", im}};
  return doc.dump(1) + "\n";
}

DensityOperator parse_state(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw StateFileError(source, e.byte, "malformed JSON (" + std::string(e.what()) + ")");
  }
  auto fail = [&](const std::string& problem) -> void { throw StateFileError(source, std::nullopt, problem); };

  if (!doc.is_object()) fail("top level must be an object");
  if (!doc.contains("format") || doc["format"] != kStateFormat)
    fail(std::string("field 'format' must be \"") + kStateFormat + "\"");
  if (!doc.contains("version") || !doc["version"].is_number_integer() || doc["version"] != kStateFormatVersion)
    fail("field 'version' must be " + std::to_string(kStateFormatVersion));
  if (!doc.contains("layout") || !doc["layout"].is_array() || doc["layout"].empty())
    fail("field 'layout' must be a non-empty array of {label, dim} objects");

  std::vector<Subsystem> systems;
  for (const auto& entry : doc["layout"]) {
    if (!entry.is_object() || !entry.contains("label") || !entry["label"].is_string() || !entry.contains("dim") ||
        !entry["dim"].is_number_unsigned() || entry["dim"].get<std::size_t>() < 1)
      fail("each layout entry needs a string 'label' and a positive integer 'dim'");
    systems.push_back({entry["label"].get<std::string>(), entry["dim"].get<std::size_t>()});
  }
  SystemLayout layout;
  try {
    layout = SystemLayout(systems);
  } catch (const std::exception& e) {
    fail(std::string("invalid layout: ") + e.what());
  }

  const std::size_t d = layout.total_dim();
  auto read_part = [&](const char* key) {
    if (!doc.contains(key) || !doc[key].is_array()) fail(std::string("field '") + key + "' must be an array");
    const auto& arr = doc[key];
    if (arr.size() != d * d)
      fail(std::string("field '") + key + "' has " + std::to_string(arr.size()) + " entries, expected " +
           std::to_string(d * d) + " for total dimension " + std::to_string(d));
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
      if (!v.is_number()) fail(std::string("field '") + key + "' must contain only numbers");
      out.push_back(v.get<double>());
    }
    return out;
  };
  const auto re = read_part("real");
  const auto im = read_part("imag");

  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Complex(re[i * d + j], im[i * d + j]);
  try {
    return DensityOperator(layout, m);
  } catch (const InvariantError& e) {
    throw StateFileError(source, std::nullopt, e.what());
  }
}

void write_state_file(const std::string& path, const DensityOperator& rho) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw StateFileError(path, std::nullopt, "cannot open for writing");
  f << format_state(rho);
  if (!f) throw StateFileError(path, std::nullopt, "write failed");
}

DensityOperator read_state_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw StateFileError(path, std::nullopt, "cannot open for reading");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_state(buf.str(), path);
}

}  // namespace privsq
