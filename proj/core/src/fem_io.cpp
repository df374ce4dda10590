#include "homoglab/error.hpp"
#include "homoglab/fem.hpp"

#include <json.hpp>

#include <cstdio>
#include <ostream>

namespace homoglab {

namespace {

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string function_to_json(const BrokenFemFunction& u) {
  nlohmann::json doc;
  doc["format"] = "homoglab.function";
  doc["version"] = 1;
  doc["mesh_hash"] = hex(u.mesh().hash());
  doc["values"] = std::vector<double>(u.values().data(), u.values().data() + u.values().size());
  return doc.dump();
}

BrokenFemFunction function_from_json(const std::string& text, std::shared_ptr<const BrokenMesh> mesh) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoFailure(std::string("function JSON parse error: ") + e.what());
  }
  if (doc.value("format", "") != "homoglab.function") throw IoFailure("not a homoglab function document");
  if (doc.value("mesh_hash", "") != hex(mesh->hash()))
    throw IoFailure("function was saved on a different mesh (hash mismatch)");
  auto values = doc.at("values").get<std::vector<double>>();
  Vector v = Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
  return BrokenFemFunction(std::move(mesh), std::move(v));
}

void write_coo(std::ostream& os, const SparseMatrix& a) {
  os << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  char buf[64];
  for (int col = 0; col < a.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      os << it.row() << ' ' << it.col() << ' ' << buf << '\n';
    }
  }
}

}  // namespace homoglab
