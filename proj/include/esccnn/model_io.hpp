#pragma once

#include "esccnn/baselines.hpp"
#include "esccnn/constructive.hpp"

#include <string>

namespace esccnn {

// Versioned JSON model files. Doubles are written with shortest
// round-trip formatting, so a save/load cycle reproduces predictions
// bit for bit.

void save_model(const EscModel& model, const std::string& path);
void save_model(const SharedConvModel& model, const std::string& path);
void save_model(const RandMlpModel& model, const std::string& path);

/// Peek at the "kind" field: "additive-conv", "shared-conv" or "rand-mlp".
std::string model_kind(const std::string& path);

EscModel load_esc_model(const std::string& path);
SharedConvModel load_shared_conv_model(const std::string& path);
RandMlpModel load_rand_mlp_model(const std::string& path);

}  // namespace esccnn
