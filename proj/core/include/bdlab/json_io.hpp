#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bdlab/fields.hpp"
#include "bdlab/functional.hpp"
#include "bdlab/measure.hpp"
#include "bdlab/quasiconvexity.hpp"
#include "bdlab/rigidity2d.hpp"
#include "bdlab/symtensor.hpp"
#include "bdlab/young_measure.hpp"

namespace bdlab::io {

using nlohmann::json;

/// A number rounded to nine significant digits; non-finite values become
/// the strings "inf", "-inf" and "nan".
json number(double x);
json vector(std::span<const double> v);

/// Row-major array of rows.
json matrix_to_json(const SymMatrix& m);
/// Accepts a square array of rows; asymmetry beyond 1e-12 is an input error.
SymMatrix matrix_from_json(const json& j);
Vec vector_from_json(const json& j);

json dyad_to_json(const DyadClass& c);

/// {"box": [lo, hi], "n": [nodes per axis]}. "n" may also be a single
/// integer applied to every axis.
json grid_to_json(const Grid& g);
Grid grid_from_json(const json& j);

/// {"grid", "values": node-major flat array with axis 0 fastest and the
/// components of each node adjacent, "jumps": [{"polyline" | "polygon", "jump"}]}.
json field_to_json(const DisplacementField& u);
DisplacementField field_from_json(const json& j);

json measure_to_json(const SymMeasure& mu);
SymMeasure measure_from_json(const json& j);

json young_measure_to_json(const YoungMeasure& nu);

json breakdown_to_json(const FunctionalBreakdown& b);
json lsc_to_json(const LscReport& r);
json strict_to_json(const StrictContinuityReport& r);
json cell_problem_to_json(const CellProblemResult& r);
json jensen_to_json(const JensenReport& r);
json inclusion_to_json(const InclusionCase& c);
json doubling_to_json(const DoublingScan& s);

json parse(const std::string& text);
json read_file(const std::string& path);
void write_file(const std::string& path, const json& j);

/// Comma-separated rows with numbers at nine significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
std::string format_number(double x);

}  // namespace bdlab::io
