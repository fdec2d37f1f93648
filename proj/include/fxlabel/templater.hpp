#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fxlabel/core.hpp"

namespace fxlabel {

// Canonical templated sentences for a finding. The grammar is closed over
// the labeler lexicon so that extract_attributes(render_finding(f))
// reproduces f (the rendered text becomes the evidence).
//
//   Fracture, located:   "Acute fracture of the left ribs, with screws in
//                         place." (one sentence per location)
//   Fracture, unlocated: "Acute left-sided fracture."
//   Normal:              "No evidence of fracture."
//   Other:               "" (nothing to say)
std::string render_finding(const FractureFinding& f);

// One row per corpus entry, ordered by study_id.
std::vector<std::pair<std::string, std::string>> render_corpus(
    const LabeledCorpus& lc);

}  // namespace fxlabel
