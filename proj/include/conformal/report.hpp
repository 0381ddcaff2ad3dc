#ifndef CONFORMAL_REPORT_HPP
#define CONFORMAL_REPORT_HPP

#include "conformal/exact.hpp"
#include "conformal/questions.hpp"
#include "conformal/sim.hpp"
#include "conformal/types.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace conformal {

using Json = nlohmann::ordered_json;

/// Infinite endpoints serialize as null; field order is fixed so that equal
/// inputs produce byte-identical documents.
Json to_json(const Interval& interval);
Json to_json(const PredictionRegion& region);
Json to_json(const RankConstants& rc);
Json to_json(const std::vector<Verdict>& verdicts);
Json to_json(const MethodReport& method);
Json to_json(const SimulationReport& report);

/// Flattens a report tree into "dotted.path: value" lines for --format text.
std::string render_text(const Json& report);

}  // namespace conformal

#endif  // CONFORMAL_REPORT_HPP
