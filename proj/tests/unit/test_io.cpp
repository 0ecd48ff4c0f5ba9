#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "hypertest/io.hpp"

using namespace hypertest;

TEST_CASE("round trips") {
  const ColoredHypergraph g = random_hypergraph(6, 3, 3, 1);
  const ColoredHypergraph g2 = hypergraph_from_json(parse_json(to_json(g).dump()));
  CHECK(g2.n() == 6);
  CHECK(g2.r() == 3);
  CHECK(g2.colors() == g.colors());

  const StepGraphon w = random_step_graphon(2, 2, 4, 3, 2);
  const StepGraphon w2 = graphon_from_json(parse_json(to_json(w).dump()));
  CHECK(w2.partition() == w.partition());
  CHECK(l1_distance(w, w2) == doctest::Approx(0.0).epsilon(1e-15));

  const CouplingArray j(2, 2, 2, {{1, -0.5, -0.5, 0.25}, {0, 0, 0, 1}});
  const CouplingArray j2 = coupling_from_json(to_json(j));
  CHECK(j2.arrays() == j.arrays());

  const SymArray a = random_sym_array(2, 5, 3);
  CHECK(sym_array_from_json(to_json(a)).values() == a.values());

  const TuplePartition p = TuplePartition::random(5, 2, 3, 4);
  CHECK(tuple_partition_from_json(to_json(p)).classes == p.classes);
}

TEST_CASE("graphs are accepted as graphons") {
  const ColoredHypergraph g = complete_graph(4);
  const StepGraphon w = graphon_or_graph_from_json(to_json(g));
  CHECK(l1_distance(w, embed(g).step()) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("errors") {
  try {
    parse_json("{\n  \"n\": 3,\n  \"r\" 2\n}", "g.json");
    FAIL("no exception");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).rfind("g.json:3:", 0) == 0);
  }
  CHECK_THROWS_AS(hypergraph_from_json(parse_json(R"({"n":3,"r":2})")), Error);
  CHECK_THROWS_AS(hypergraph_from_json(parse_json(R"({"n":3,"r":2,"k":2,"colors":[1,2]})")), Error);
  CHECK_THROWS_AS(hypergraph_from_json(parse_json(R"({"n":3,"r":2,"k":2,"colors":[1,2,3]})")), Error);
  CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), Error);
}

TEST_CASE("file reading") {
  const auto path = std::filesystem::temp_directory_path() / "hypertest_io_test.json";
  {
    std::ofstream out(path);
    out << to_json(empty_graph(3)).dump(2);
  }
  CHECK(hypergraph_from_json(read_json_file(path.string())).colors() == empty_graph(3).colors());
  std::filesystem::remove(path);
}
