#include "fxlabel/lexicon.hpp"

namespace fxlabel {

// Compiled-in copies of data/lexicon.txt and data/synonyms.txt so the
// toolkit works without locating its data directory.

std::string_view bundled_lexicon_text() {
  static constexpr std::string_view text = R"LEX(
# Keyword table for the fracture report labeler.
# One entry per line: category<TAB>pattern[<TAB>payload]
# Patterns match case-insensitively against word tokens; multi-word patterns
# match contiguous token runs, longest match first. Lines starting with "#"
# are comments.

# fracture terms
fracture_term	fracture
fracture_term	fractures
fracture_term	fractured
fracture_term	fx
fracture_term	fxs
fracture_term	nonunion
fracture_term	nonunions
fracture_term	compression deformity
fracture_term	compression deformities
fracture_term	wedge deformity
fracture_term	wedge deformities
# deformity counts only next to a bone term ("clavicular deformity")
fracture_term	deformity	bone_adjacent
fracture_term	deformities	bone_adjacent
# wire failure wording counts only when the sentence names sternal wires
fracture_term	disruption	wires_context
fracture_term	disrupted	wires_context
fracture_term	fragmented	wires_context

# negation cues
negation_cue	no
negation_cue	without
negation_cue	no evidence of
negation_cue	negative for
negation_cue	rules out
negation_cue	rule out
negation_cue	ruled out
negation_cue	free of
negation_cue	absence of

# laterality
laterality_cue	left	left
laterality_cue	right	right
laterality_cue	bilateral	both
laterality_cue	bilaterally	both

# stage
stage_cue	acute	acute
stage_cue	new	acute
stage_cue	recent	acute
stage_cue	chronic	healed
stage_cue	old	healed
stage_cue	healed	healed
stage_cue	remote	healed
stage_cue	prior	healed

# anatomy
anatomy_cue	rib	ribs
anatomy_cue	ribs	ribs
anatomy_cue	costal	ribs
anatomy_cue	clavicle	clavicle
anatomy_cue	clavicles	clavicle
anatomy_cue	clavicular	clavicle
anatomy_cue	collarbone	clavicle
anatomy_cue	shoulder	shoulder
anatomy_cue	shoulders	shoulder
anatomy_cue	humerus	shoulder
anatomy_cue	humeral	shoulder
anatomy_cue	glenohumeral	shoulder
anatomy_cue	spine	spine
anatomy_cue	vertebra	spine
anatomy_cue	vertebrae	spine
anatomy_cue	vertebral	spine
anatomy_cue	thoracic	spine
anatomy_cue	lumbar	spine
anatomy_cue	cervical	spine
anatomy_cue	compression	spine
anatomy_cue	t1	spine
anatomy_cue	t2	spine
anatomy_cue	t3	spine
anatomy_cue	t4	spine
anatomy_cue	t5	spine
anatomy_cue	t6	spine
anatomy_cue	t7	spine
anatomy_cue	t8	spine
anatomy_cue	t9	spine
anatomy_cue	t10	spine
anatomy_cue	t11	spine
anatomy_cue	t12	spine
anatomy_cue	l1	spine
anatomy_cue	l2	spine
anatomy_cue	l3	spine
anatomy_cue	l4	spine
anatomy_cue	l5	spine
anatomy_cue	sternum	sternum
anatomy_cue	sternal	sternum
anatomy_cue	manubrium	sternum
anatomy_cue	scapula	scapula
anatomy_cue	scapulae	scapula
anatomy_cue	scapular	scapula
anatomy_cue	sternal wires	sternal wires
anatomy_cue	sternal wire	sternal wires
anatomy_cue	sternotomy wires	sternal wires
anatomy_cue	sternotomy wire	sternal wires
anatomy_cue	cerclage wires	sternal wires
anatomy_cue	cerclage wire	sternal wires
anatomy_cue	other bones	other
anatomy_cue	pelvis	other
anatomy_cue	pelvic	other
anatomy_cue	femur	other
anatomy_cue	femoral	other
anatomy_cue	hip	other
anatomy_cue	sacrum	other
anatomy_cue	sacral	other
anatomy_cue	iliac	other

# implants
implant_cue	screw	screws
implant_cue	screws	screws
implant_cue	rod	rods
implant_cue	rods	rods
implant_cue	plate	plates
implant_cue	plates	plates
implant_cue	hardware	other
implant_cue	pin	other
implant_cue	pins	other
)LEX";
  return text.substr(1);  // drop the leading newline of the raw string
}

std::string_view bundled_synonyms_text() {
  static constexpr std::string_view text = R"SYN(
# Label-preserving lexical swaps for the robustness harness.
# One entry per line: synonym<TAB>token<TAB>replacement
# The replacement may span several words.
synonym	fracture	fx
synonym	fx	fracture
synonym	fractures	fxs
synonym	fxs	fractures
synonym	old	chronic
synonym	chronic	old
synonym	healed	remote
synonym	remote	healed
synonym	noted	seen
synonym	seen	noted
synonym	identified	noted
synonym	bilateral	left and right
)SYN";
  return text.substr(1);
}

}  // namespace fxlabel
