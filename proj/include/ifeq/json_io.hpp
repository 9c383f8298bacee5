#ifndef IFEQ_JSON_IO_HPP
#define IFEQ_JSON_IO_HPP

#include <json.hpp>
#include <string>

#include "ifeq/cyclic_code.hpp"
#include "ifeq/lattice.hpp"
#include "ifeq/simulator.hpp"
#include "ifeq/spectral.hpp"

namespace ifeq::io {

using nlohmann::json;

const char* build_version();

// Polynomials serialize as arrays: bare numbers for real coefficients,
// [re, im] pairs otherwise. Both forms parse.
Poly poly_from_json(const json& j);
json poly_to_json(const Poly& p);

IntFilter filter_from_json(const json& j);
json filter_to_json(const IntFilter& f);

// {"N":..,"K":..,"q":..,"g":[low-to-high]}; also accepts the shipped aliases
// "parity5" and "hamming74".
CyclicCode code_from_json(const json& j);
json code_to_json(const CyclicCode& c);

EqMode mode_from_string(const std::string& s);

SimConfig sim_config_from_json(const json& j);
json sim_config_to_json(const SimConfig& c);
json sim_result_to_json(const SimResult& r, const SimConfig& c);

json search_result_to_json(const FilterSearchResult& r);
json bound_report_to_json(const BoundReport& r);
json analysis_to_json(const ChannelAnalysis& a);
json delay_report_to_json(const DelayCheckReport& r);

}  // namespace ifeq::io

#endif
