#pragma once

#include "unispace/covering.hpp"
#include "unispace/forms.hpp"
#include "unispace/immersion.hpp"
#include "unispace/regularity.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>

namespace unispace::io {

using json = nlohmann::json;

struct FormatError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Exact rationals: a JSON number when the value is a double, "p/q" otherwise.
json to_json(const Rational& q);
Rational rational_from_json(const json& j);

json to_json(const Matrix<Rational>& m);  // list of rows
Matrix<Rational> matrix_from_json(const json& j);

// {"dim", "vertices", "simplices" (0-based vertex ids), "periodic"}
json to_json(const SimplicialComplex& K);
SimplicialComplex complex_from_json(const json& j);

// {"chart_dim", "degree", "coeffs": {"1,2": "<expr>"}}
json to_json(const DifferentialForm& a);
DifferentialForm form_from_json(const json& j);

// {"source_dim", "components": ["<expr>", ...]}
json to_json(const SmoothMap& f);
SmoothMap map_from_json(const json& j);

// {"dim", "degree", "coeffs": {"1,2,3": "1"}}
json to_json(const AltForm<Rational>& a);
AltForm<Rational> altform_from_json(const json& j);

// {"ambient", "vectors": [[...], ...]}, one entry per spanning vector
json to_json(const Subspace& T);
Subspace subspace_from_json(const json& j);

json to_json(const RegularityCertificate& c);
json to_json(const StageRecord& s);
json to_json(const Staircase& s);
json to_json(const FormalMonomorphism& f);

json to_json(const CoverOptions& o);
CoverOptions cover_options_from_json(const json& j);
json to_json(const CoverageReport& r);
json to_json(const PartitionCheck& p);
json to_json(const NashCovering& cov);

json to_json(const AssembledImmersion& A);
AssembledImmersion immersion_from_json(const json& j);
json to_json(const ShrinkInfo& s);
json to_json(const VerificationReport& r);
json to_json(const GraphRegularityReport& r);

json read_file(const std::string& path);
void write_file(const std::string& path, const json& j);

}  // namespace unispace::io
