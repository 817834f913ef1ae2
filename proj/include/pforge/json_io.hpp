#pragma once

#include <json.hpp>

#include "pforge/colourings.hpp"
#include "pforge/group.hpp"
#include "pforge/patterns.hpp"

namespace pforge {

using nlohmann::json;

// {"factors":[{"kind":"cyclic","m":3},{"kind":"prime_power","p":3,"k":2},
//             {"kind":"int_box","bound":2},{"kind":"rat_box","den":6,"bound":2}]}
json to_json(const GroupSpec &spec);
GroupSpec group_spec_from_json(const json &j);

// Integers per coordinate; rat_box coordinates as [num, den].
json element_to_json(const Element &x);
Element element_from_json(const GroupSpec &spec, const json &j);

// {"n":2,"m":3,"l":3,"rows":[[1,2,0],[0,1,2]]}
json to_json(const Pattern &p);
Pattern pattern_from_json(const json &j);

json to_json(const SearchOutcome &o);

json to_json(const BranchSet &x);
BranchSet branch_set_from_json(const json &j);

} // namespace pforge
