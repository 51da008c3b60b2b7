#ifndef IONET_SERIALIZE_HPP_
#define IONET_SERIALIZE_HPP_

#include <string>

#include <json.hpp>

#include <ionet/chains.hpp>
#include <ionet/influence.hpp>
#include <ionet/missing.hpp>
#include <ionet/stochastic.hpp>

namespace ionet {

nlohmann::json to_json(const InfluenceResult &r);
nlohmann::json to_json(const BoundCertificate &c);
nlohmann::json to_json(const TrialReport &r);

// {"d":[...], "c":[{"i":..,"j":..,"v":..}, ...]}
MissingSpec missing_spec_from_json(const nlohmann::json &doc);
nlohmann::json to_json(const MissingSpec &spec);

// {"blocks":[[0,1],[2,3,4],...]}
std::vector<std::vector<int>> blocks_from_json(const nlohmann::json &doc);

// {"n":int, "y":[[...],...]} with nonnegative integer dollar flows.
FlowMatrix flow_matrix_from_json(const nlohmann::json &doc);

nlohmann::json load_json_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);

} // namespace ionet

#endif // IONET_SERIALIZE_HPP_
