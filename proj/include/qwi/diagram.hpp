// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qwi/sizes.hpp"

namespace qwi {

// Size-indexed diagram of finite sets D_i = {0..n_i-1} with transition
// tables δ_{i,j} for every i < j in the universe.
struct Diagram {
  std::shared_ptr<const SizeUniverse> universe;
  std::vector<std::size_t> sizes;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> maps;

  const std::vector<std::size_t>& delta(std::size_t i, std::size_t j) const;
  // δ_{i,k} = δ_{j,k} ∘ δ_{i,j}; throws FunctorialityViolation.
  void validate() const;

  static Diagram constant(std::shared_ptr<const SizeUniverse> u, std::size_t n);
  // D_i = {0..height(i)} with inclusions.
  static Diagram growingChain(std::shared_ptr<const SizeUniverse> u);
};

// (Σ_i D_i)/∼ with (i,x) ∼ (j,y) iff δ_{i,k} x = δ_{j,k} y for some k
// above both. Only members with a strict upper bound in the universe
// contribute; maximal members are apexes whose elements are read back
// along δ.
struct Colimit {
  std::vector<std::size_t> interior;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> inject;
  std::size_t classCount = 0;
  bool coconeHolds = true;

  // ν_i x; for an apex i, the class of any interior preimage.
  std::optional<std::size_t> classOf(const Diagram& d, std::size_t i, std::size_t x) const;
  bool isInterior(std::size_t i) const;
};

Colimit colim(const Diagram& d);

struct CocontinuityReport {
  bool injective = true;
  bool surjective = true;
  std::size_t functionsChecked = 0;
  std::size_t colimitClasses = 0;
  std::size_t powerClasses = 0;
  std::string counterexample;
  std::vector<std::string> witnesses;  // surjectivity: g ↦ (i, f')
  bool ok() const { return injective && surjective; }
};

// κ : colim(D^X) → (colim D)^X for |X| = xSize, checked exhaustively.
CocontinuityReport checkPowerCocontinuity(const Diagram& d, std::size_t xSize);

}  // namespace qwi
