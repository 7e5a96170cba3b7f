#pragma once

// Serialization: polygon/walk JSONL records, count CSV, verification
// report JSON, and atomic file writes.

#include <sapforge/polygon.hpp>
#include <sapforge/walk.hpp>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sapforge {

using json = nlohmann::json;

// {"dim":2,"n":n,"tour":[[x,y],...]} — canonical tour, closing edge implicit
inline json polygon_to_json(const Polygon& phi) {
  json tour = json::array();
  for (const Pt& p : phi.tour()) tour.push_back({x(p), y(p)});
  return json{{"dim", 2}, {"n", phi.length()}, {"tour", std::move(tour)}};
}

inline Polygon polygon_from_json(const json& j) {
  if (j.at("dim").get<int>() != 2) throw std::invalid_argument("polygon record: dim must be 2");
  std::vector<Pt> tour;
  for (const auto& v : j.at("tour")) tour.push_back(pt(v.at(0).get<int>(), v.at(1).get<int>()));
  if (static_cast<int>(tour.size()) != j.at("n").get<int>())
    throw std::invalid_argument("polygon record: n does not match tour size");
  Polygon p = Polygon::from_tour(tour);
  if (p.tour() != tour) throw std::invalid_argument("polygon record: tour is not canonical");
  return p;
}

inline std::string polygon_to_jsonl(const Polygon& phi) { return polygon_to_json(phi).dump(); }
inline Polygon polygon_from_jsonl(const std::string& line) {
  return polygon_from_json(json::parse(line));
}

// generic vertex-list record for d-dimensional walks / 3-edge tours
inline json vertices_to_json(const std::vector<Pt>& vs, int dim) {
  json arr = json::array();
  for (const Pt& p : vs) {
    json v = json::array();
    for (int i = 0; i < dim; ++i) v.push_back(p[i]);
    arr.push_back(std::move(v));
  }
  return arr;
}

inline std::vector<Pt> vertices_from_json(const json& arr, int dim) {
  std::vector<Pt> out;
  for (const auto& v : arr) {
    if (static_cast<int>(v.size()) != dim)
      throw std::invalid_argument("vertex record: wrong dimension");
    Pt p{0, 0, 0};
    for (int i = 0; i < dim; ++i) p[i] = v.at(i).get<int>();
    out.push_back(p);
  }
  return out;
}

// verification report entry: {"lemma":..., "n":..., "lhs":..., "rhs":..., "holds":...}
inline json ledger_report(const std::string& lemma, int n, const std::string& lhs,
                          const std::string& rhs, bool holds) {
  return json{{"lemma", lemma}, {"n", n}, {"lhs", lhs}, {"rhs", rhs}, {"holds", holds}};
}

// write-to-temp-then-rename so readers never observe partial output
inline void atomic_write(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << contents;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace sapforge
