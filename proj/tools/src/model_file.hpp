#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hmfsvm/dataset.hpp"
#include "hmfsvm/hierarchy.hpp"
#include "hmfsvm/logistic.hpp"
#include "hmfsvm/mfsvm.hpp"
#include "hmfsvm/scaling.hpp"

namespace hmfsvm::cli {

enum class Variant { Svm, Fsvm, Mfsvm, Hmfsvm, Logistic };

std::string_view to_string(Variant v) noexcept;
// Throws ConfigError on an unknown name.
Variant parse_variant(std::string_view name);
// Membership scheme of the flat variants: svm uniform, fsvm input space,
// mfsvm kernel space.
MembershipScheme membership_for(Variant v);

/// Trained model as stored by `train`: the feature names it expects, the
/// standardizer fitted on its training rows and the variant's own document.
struct ModelFile {
  static constexpr const char* kSchema = "hmfsvm-model";
  static constexpr int kVersion = 1;

  Variant variant = Variant::Mfsvm;
  std::vector<std::string> feature_names;
  Standardizer scaler;
  std::variant<MfsvmModel, HierarchyModel, LogisticModel> model;

  // Positive-class probability of a raw (unstandardized) feature row.
  double predict(const Vector& raw) const;

  std::string to_string() const;
  static ModelFile from_string(const std::string& text);
  // Throws InputError if the file is missing or malformed.
  static ModelFile load(const std::filesystem::path& path);
};

}  // namespace hmfsvm::cli
