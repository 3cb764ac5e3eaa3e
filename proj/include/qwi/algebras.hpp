// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#pragma once

#include <string>
#include <vector>

#include "qwi/algebra.hpp"
#include "qwi/quotient.hpp"

namespace qwi {

// Constants ↦ 0, σ(a, b) ↦ 1 + Σ b, saturating at cap so that the carrier
// {0..cap} is finite and environments can be drawn from it. Undefined at ℕ
// arities.
AlgebraSpec lengthAlgebra(std::uint64_t cap = 64);
// length mod 2, carrier {0, 1}.
AlgebraSpec parityAlgebra();

// P x = 𝟚 for every x; each node flips the parity of the sum of its
// children's motive values.
EliminatorInput parityEliminator();

std::vector<std::string> builtinAlgebraNames();
AlgebraSpec builtinAlgebra(const std::string& name);  // throws Usage

}  // namespace qwi
