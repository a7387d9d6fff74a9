#pragma once

#include "regbis/fo.hpp"

namespace regbis::fmt {

// S-expression formula syntax:
//   (forall (x S) body)   (exists (x S) body)
//   (and f g ...) (or f g ...) (not f) (implies f g) (iff f g)
//   (rel x y ...)
fo::FormulaPtr parse_formula(const std::string& text);

}  // namespace regbis::fmt
