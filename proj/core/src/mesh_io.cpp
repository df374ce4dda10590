#include "homoglab/error.hpp"
#include "homoglab/mesh.hpp"

#include <json.hpp>

namespace homoglab {

using nlohmann::json;

std::string mesh_to_json(const BrokenMesh& mesh) {
  json doc;
  doc["format"] = "homoglab.mesh";
  doc["version"] = 1;
  doc["omega_length"] = mesh.omega_length;
  doc["ell"] = mesh.ell;
  doc["merged"] = mesh.merged;

  json vertices = json::array();
  for (const auto& v : mesh.vertices) vertices.push_back({v.x(), v.y()});
  doc["vertices"] = std::move(vertices);

  json triangles = json::array();
  for (const auto& t : mesh.triangles) triangles.push_back({t.v[0], t.v[1], t.v[2], side_sign(t.side)});
  doc["triangles"] = std::move(triangles);

  json pairs = json::array();
  for (const auto& p : mesh.interface_pairs) pairs.push_back({p.plus, p.minus});
  doc["interface_pairs"] = std::move(pairs);

  json line = json::array();
  for (const auto& p : mesh.interface_line) line.push_back({p.x(), p.y()});
  doc["interface_line"] = std::move(line);

  doc["boundary"] = mesh.boundary_vertices;
  return doc.dump();
}

BrokenMesh mesh_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw IoFailure(std::string("mesh JSON parse error: ") + e.what());
  }
  if (doc.value("format", "") != "homoglab.mesh") throw IoFailure("not a homoglab mesh document");

  BrokenMesh mesh;
  try {
    mesh.omega_length = doc.at("omega_length").get<double>();
    mesh.ell = doc.at("ell").get<double>();
    mesh.merged = doc.at("merged").get<bool>();
    for (const auto& v : doc.at("vertices")) mesh.vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    for (const auto& t : doc.at("triangles")) {
      int side = t.at(3).get<int>();
      mesh.triangles.push_back({{t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()},
                                side > 0 ? Side::plus : Side::minus});
    }
    for (const auto& p : doc.at("interface_pairs")) mesh.interface_pairs.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
    for (const auto& p : doc.at("interface_line")) mesh.interface_line.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    mesh.boundary_vertices = doc.at("boundary").get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw IoFailure(std::string("malformed mesh JSON: ") + e.what());
  }

  const int n = static_cast<int>(mesh.vertices.size());
  auto check = [n](int v) {
    if (v < 0 || v >= n) throw IoFailure("mesh JSON references vertex " + std::to_string(v));
  };
  for (const auto& t : mesh.triangles) for (int v : t.v) check(v);
  for (const auto& p : mesh.interface_pairs) {
    check(p.plus);
    check(p.minus);
  }
  for (int v : mesh.boundary_vertices) check(v);

  for (std::size_t i = 0; i + 1 < mesh.interface_pairs.size(); ++i) {
    const Point& a = mesh.vertices[mesh.interface_pairs[i].plus];
    const Point& b = mesh.vertices[mesh.interface_pairs[i + 1].plus];
    mesh.interface_segments.push_back({static_cast<int>(i), static_cast<int>(i + 1), (b - a).norm()});
  }
  return mesh;
}

}  // namespace homoglab
