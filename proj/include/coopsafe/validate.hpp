#pragma once

#include "coopsafe/catalog.hpp"
#include "coopsafe/diagnostics.hpp"
#include "coopsafe/model.hpp"

namespace coopsafe {

/// Checks every structural invariant of a parsed model. The result is empty
/// iff the model is well formed; warnings do not block analysis.
Diagnostics validate_model(const Model& model);

/// Checks tactic references and response classes against a catalog.
Diagnostics validate_against_catalog(const Model& model, const Catalog& catalog);

}  // namespace coopsafe
