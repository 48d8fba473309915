#include "model_file.hpp"

#include <fstream>
#include <sstream>

#include "hmfsvm/error.hpp"
#include "hmfsvm/text_io.hpp"

namespace hmfsvm::cli {

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::Svm:
      return "svm";
    case Variant::Fsvm:
      return "fsvm";
    case Variant::Mfsvm:
      return "mfsvm";
    case Variant::Hmfsvm:
      return "hmfsvm";
    case Variant::Logistic:
      return "logistic";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::Svm, Variant::Fsvm, Variant::Mfsvm, Variant::Hmfsvm, Variant::Logistic}) {
    if (name == to_string(v)) return v;
  }
  throw ConfigError("unknown model variant '" + std::string(name) +
                    "' (expected svm, fsvm, mfsvm, hmfsvm or logistic)");
}

MembershipScheme membership_for(Variant v) {
  switch (v) {
    case Variant::Svm:
      return MembershipScheme::Uniform;
    case Variant::Fsvm:
      return MembershipScheme::InputSpace;
    default:
      return MembershipScheme::KernelSpace;
  }
}

double ModelFile::predict(const Vector& raw) const {
  const Vector x = scaler.transform(raw);
  if (const auto* m = std::get_if<MfsvmModel>(&model)) return m->predict_prob(x);
  if (const auto* h = std::get_if<HierarchyModel>(&model)) return h->predict(static_sample(x));
  return std::get<LogisticModel>(model).predict_prob(x);
}

std::string ModelFile::to_string() const {
  std::ostringstream os;
  TokenWriter out(os);
  out.word(kSchema).integer(kVersion).newline();
  out.word("variant").word(cli::to_string(variant)).newline();
  out.word("features").integer(static_cast<std::int64_t>(feature_names.size()));
  for (const auto& name : feature_names) out.word(name);
  out.newline();
  scaler.write(out);
  std::visit([&out](const auto& m) { m.write(out); }, model);
  out.word("end").newline();
  return os.str();
}

ModelFile ModelFile::from_string(const std::string& text) {
  std::istringstream is(text);
  TokenReader in(is);
  ModelFile f;
  in.expect_header(kSchema, kVersion);
  in.expect("variant");
  f.variant = parse_variant(in.word());
  in.expect("features");
  const std::size_t n = in.count();
  for (std::size_t i = 0; i < n; ++i) f.feature_names.push_back(in.word());
  f.scaler = Standardizer::read(in);
  if (f.scaler.dim() != n) throw InputError("model standardizer does not match its feature list");
  switch (f.variant) {
    case Variant::Hmfsvm:
      f.model = HierarchyModel::read(in);
      break;
    case Variant::Logistic:
      f.model = LogisticModel::read(in);
      break;
    default:
      f.model = MfsvmModel::read(in);
  }
  in.expect("end");
  return f;
}

ModelFile ModelFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return from_string(buf.str());
  } catch (const ConfigError& e) {
    throw InputError("model file '" + path.string() + "': " + e.what());
  } catch (const InputError& e) {
    throw InputError("model file '" + path.string() + "': " + e.what());
  }
}

}  // namespace hmfsvm::cli
