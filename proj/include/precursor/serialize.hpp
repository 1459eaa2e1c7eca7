#pragma once

#include <string>

#include <json.hpp>

#include "precursor/detect.hpp"
#include "precursor/eval.hpp"
#include "precursor/grouping.hpp"
#include "precursor/matching.hpp"
#include "precursor/simgen.hpp"
#include "precursor/synth.hpp"

namespace precursor {

using Json = nlohmann::ordered_json;

/// Real as JSON number; +inf as the string "inf", NaN as null.
Json real_json(double v);
double real_from_json(const Json& j);

Json to_json(const ParameterGrouping& g);
Json to_json(const SubspaceDetector& det);
SubspaceDetector detector_from_json(const Json& j);
Json to_json(const MatchCounts& c);
Json to_json(const MatchStats& s);
Json to_json(const AlarmSeries& a);
Json to_json(const PrecursorSet& p);
Json to_json(const FoldResult& f);
Json to_json(const CrossValidation& cv);
Json to_json(const sim::Manifest& m);

/// Stable text form: two-space indent and a trailing newline.
std::string dump(const Json& j);

}  // namespace precursor
