#pragma once

#include <json.hpp>

#include "kpls/bounds.hpp"
#include "kpls/estimators.hpp"
#include "kpls/simulate.hpp"

namespace kpls {

nlohmann::ordered_json to_json(const Vector& v);
nlohmann::ordered_json to_json(const PlsFit& fit);
nlohmann::ordered_json to_json(const AssumptionReport& rep);
nlohmann::ordered_json to_json(const BoundReport& rep);
nlohmann::ordered_json to_json(const CoverageResult& res);

}  // namespace kpls
