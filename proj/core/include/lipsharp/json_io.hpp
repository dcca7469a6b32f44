#pragma once

#include <json.hpp>

#include "lipsharp/capacity.hpp"
#include "lipsharp/cube_tree.hpp"
#include "lipsharp/grid_check.hpp"
#include "lipsharp/params.hpp"
#include "lipsharp/step_function.hpp"

namespace lipsharp::io {

using nlohmann::json;

/// Numbers with |log2| > 900 are emitted as {"m": mantissa, "e2": exponent}
/// ("wide" form); everything else as plain JSON numbers.
json exp2_to_json(const num::Exp2& v);
num::Exp2 exp2_from_json(const json& j);

/// Exact dyadic rationals as "p/2^e" strings (plain integer string when e=0).
json dyadic_to_json(const num::Dyadic& v);
num::Dyadic dyadic_from_json(const json& j);

json step_function_to_json(const lorentz::StepFunction& f);
lorentz::StepFunction step_function_from_json(const json& j);

/// Profiles serialize as named built-ins plus parameters.
json profile_to_json(const lorentz::RadialProfile& g);
lorentz::RadialProfile profile_from_json(const json& j);

json params_to_json(const cubetree::ParamSequence& p);
cubetree::ParamSequence params_from_json(const json& j);

json chain_to_json(const cubetree::CubeChain& c);
cubetree::CubeChain chain_from_json(const json& j);

json bump_to_json(const capacity::Bump& b);

json grid_field_to_json(const gradcheck::GridField& g);
gradcheck::GridField grid_field_from_json(const json& j);

}  // namespace lipsharp::io
