#include "hypertest/io.hpp"

#include <fstream>
#include <sstream>

namespace hypertest {

namespace {

template <class T>
T field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw Error(std::string("missing field \"") + name + "\"");
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(std::string("field \"") + name + "\" has the wrong type");
  }
}

std::vector<std::vector<double>> color_arrays(const Json& j, int k, std::size_t size) {
  const Json& a = j.at("arrays");
  if (!a.is_object()) throw Error("\"arrays\" must be an object keyed by color");
  std::vector<std::vector<double>> out(k);
  for (int alpha = 1; alpha <= k; ++alpha) {
    const std::string key = std::to_string(alpha);
    if (!a.contains(key)) throw Error("\"arrays\" lacks color " + key);
    out[alpha - 1] = a.at(key).get<std::vector<double>>();
    if (out[alpha - 1].size() != size)
      throw Error("array for color " + key + " has " + std::to_string(out[alpha - 1].size()) + " entries, expected " +
                  std::to_string(size));
  }
  return out;
}

Json arrays_json(const std::vector<std::vector<double>>& arrays) {
  Json a = Json::object();
  for (std::size_t i = 0; i < arrays.size(); ++i) a[std::to_string(i + 1)] = arrays[i];
  return a;
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    const auto pos = msg.find("syntax error");
    if (pos != std::string::npos) msg = msg.substr(pos);
    throw Error(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON: " + msg);
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

Json to_json(const EdgeColoring& g) {
  Json j;
  j["n"] = g.n();
  j["r"] = g.r();
  j["k"] = g.k();
  j["colors"] = g.colors();
  return j;
}

ColoredHypergraph hypergraph_from_json(const Json& j) {
  return ColoredHypergraph(field<int>(j, "n"), field<int>(j, "r"), field<int>(j, "k"),
                           field<std::vector<Color>>(j, "colors"));
}

SampledColoredGraph sampled_graph_from_json(const Json& j) {
  return SampledColoredGraph(field<int>(j, "n"), field<int>(j, "r"), field<int>(j, "k"),
                             field<std::vector<Color>>(j, "colors"));
}

Json to_json(const StepGraphon& w) {
  Json j;
  j["r"] = w.r();
  j["k"] = w.k();
  j["t"] = w.t();
  const GridGeometry& g = w.geometry();
  if (g.resolution() > 0)
    j["resolution"] = g.resolution();
  else
    j["breaks"] = g.all_breaks();
  j["labels"] = w.partition().labels();
  j["arrays"] = arrays_json(w.arrays());
  if (w.iota_allowed()) j["iota"] = true;
  return j;
}

StepGraphon graphon_from_json(const Json& j) {
  const int r = field<int>(j, "r"), k = field<int>(j, "k"), t = field<int>(j, "t");
  if (r < 1) throw Error("r must be positive");
  if (k < 1) throw Error("k must be positive");
  if (t < 1) throw Error("t must be positive");
  const int m = r - 1;
  GridGeometry geom;
  if (j.contains("breaks")) {
    geom = GridGeometry(m, field<std::vector<std::vector<double>>>(j, "breaks"));
  } else {
    geom = GridGeometry::uniform(m, j.contains("resolution") ? field<int>(j, "resolution") : 1);
  }
  std::vector<int> labels =
      j.contains("labels") ? field<std::vector<int>>(j, "labels") : std::vector<int>(geom.cell_count(), 0);
  if (labels.size() != geom.cell_count())
    throw Error("\"labels\" has " + std::to_string(labels.size()) + " entries, the grid has " +
                std::to_string(geom.cell_count()) + " cells");
  std::size_t size = 1;
  for (int i = 0; i < r; ++i) size *= static_cast<std::size_t>(t);
  GridPartition p(std::move(geom), std::move(labels), t);
  const bool iota = j.contains("iota") && field<bool>(j, "iota");
  return StepGraphon(r, k, std::move(p), color_arrays(j, k, size), iota);
}

Json to_json(const CouplingArray& c) {
  Json j;
  j["k"] = c.k();
  j["q"] = c.q();
  j["r"] = c.r();
  j["arrays"] = arrays_json(c.arrays());
  return j;
}

CouplingArray coupling_from_json(const Json& j) {
  const int r = field<int>(j, "r"), k = field<int>(j, "k"), q = field<int>(j, "q");
  if (q < 1 || r < 1 || k < 1) throw Error("coupling array needs positive r, k, q");
  std::size_t size = 1;
  for (int i = 0; i < r; ++i) size *= static_cast<std::size_t>(q);
  return CouplingArray(r, k, q, color_arrays(j, k, size));
}

StepGraphon graphon_or_graph_from_json(const Json& j) {
  if (j.is_object() && j.contains("n")) return VertexGraphon(hypergraph_from_json(j)).step();
  return graphon_from_json(j);
}

Json to_json(const SymArray& a) {
  Json j;
  j["r"] = a.r();
  j["n"] = a.n();
  j["values"] = a.values();
  return j;
}

SymArray sym_array_from_json(const Json& j) {
  return SymArray(field<int>(j, "r"), field<int>(j, "n"), field<std::vector<double>>(j, "values"));
}

Json to_json(const TuplePartition& p) {
  Json j;
  j["n"] = p.n;
  j["r_minus_1"] = p.r_minus_1;
  j["t"] = p.t;
  j["classes"] = p.classes;
  return j;
}

TuplePartition tuple_partition_from_json(const Json& j) {
  return TuplePartition(field<int>(j, "n"), field<int>(j, "r_minus_1"), field<int>(j, "t"),
                        field<std::vector<int>>(j, "classes"));
}

Json to_json(const GridPartition& p) {
  Json j;
  j["t"] = p.t();
  const GridGeometry& g = p.geometry();
  if (g.resolution() > 0)
    j["resolution"] = g.resolution();
  else
    j["breaks"] = g.all_breaks();
  j["labels"] = p.labels();
  return j;
}

Json to_json(const SampleDistribution& d) {
  Json j = Json::object();
  for (std::size_t i = 0; i < d.support_size(); ++i)
    if (d.prob(i) != 0) j[SampleDistribution::key(d.decode(i))] = d.prob(i);
  return j;
}

Json to_json(const CutWitness& w) {
  Json j;
  j["sets"] = w.sets;
  if (!w.signs.empty()) j["signs"] = w.signs;
  return j;
}

Json to_json(const CutResult& c) {
  Json j;
  j["value"] = c.value;
  j["mode"] = mode_name(c.mode);
  j["witness"] = to_json(c.witness);
  return j;
}

Json to_json(const Rational& r) {
  Json j;
  j["num"] = r.num;
  j["den"] = r.den;
  j["value"] = r.value();
  return j;
}

}  // namespace hypertest
