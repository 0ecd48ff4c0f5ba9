#pragma once

#include <string>

#include <json.hpp>

#include "hypertest/cutnorm.hpp"
#include "hypertest/density.hpp"
#include "hypertest/energy.hpp"
#include "hypertest/graphon.hpp"
#include "hypertest/hypercore.hpp"

namespace hypertest {

using Json = nlohmann::ordered_json;

// Parses JSON text; syntax errors are reported as "<source>:line:column: msg".
Json parse_json(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::string& path);

// {"n","r","k","colors":[colex order]}
Json to_json(const EdgeColoring& g);
ColoredHypergraph hypergraph_from_json(const Json& j);
SampledColoredGraph sampled_graph_from_json(const Json& j);

// {"r","k","t","resolution"|"breaks","labels","arrays":{"1":[...],...},"iota"}.
// Labels are 0-based class ids in row-major order over the graded axes;
// "breaks" lists one breakpoint vector per level for non-uniform grids.
Json to_json(const StepGraphon& w);
StepGraphon graphon_from_json(const Json& j);

// {"k","q","r","arrays":{"1":[...],...}}
Json to_json(const CouplingArray& j);
CouplingArray coupling_from_json(const Json& j);

// Colored hypergraphs are accepted wherever graphons are: {"n",...} inputs
// become their vertex step graphon.
StepGraphon graphon_or_graph_from_json(const Json& j);

// {"r","n","values":[row-major over [n]^r]}
Json to_json(const SymArray& a);
SymArray sym_array_from_json(const Json& j);
// {"n","r_minus_1","t","classes":[0-based, colex order of (r-1)-subsets]}
Json to_json(const TuplePartition& p);
TuplePartition tuple_partition_from_json(const Json& j);
Json to_json(const GridPartition& p);

// Probabilities keyed by SampleDistribution::key, zero entries omitted.
Json to_json(const SampleDistribution& d);
Json to_json(const CutWitness& w);
Json to_json(const CutResult& c);
Json to_json(const Rational& r);

}  // namespace hypertest
