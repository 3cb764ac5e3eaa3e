// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#pragma once

#include <string>

#include <json.hpp>

#include "qwi/signature.hpp"

namespace qwi {

using Json = nlohmann::ordered_json;

Json toJson(const Arity& a);
Json toJson(const Signature& sig);
Json toJson(const SystemOfEquations& sys);
// {"ops": [...], "equations": [...]} with a fixed field order.
Json toJson(const Signature& sig, const SystemOfEquations& sys);

Signature signatureFromJson(const Json& j);
SystemOfEquations systemFromJson(const Json& j);

std::string dumpStable(const Json& j);

}  // namespace qwi
