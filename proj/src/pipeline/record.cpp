#include <fstream>
#include <stdexcept>
#include <string>

#include "degsynth/pipeline.hpp"

namespace degsynth {

using nlohmann::json;

namespace {

constexpr const char* kRecordFormat = "degsynth-record/1";

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument("record: " + message);
}

json kernel_json(const KernelSpec& spec) {
  json j = {{"family", family_name(family_of(spec))}, {"size", spec.size}};
  std::visit(Overloaded{
                 [&](const GaussianShape& g) {
                   j["sigma1"] = g.sigma1;
                   j["sigma2"] = g.sigma2;
                   j["theta"] = g.theta;
                 },
                 [&](const GeneralizedGaussianShape& g) {
                   j["sigma1"] = g.sigma1;
                   j["sigma2"] = g.sigma2;
                   j["theta"] = g.theta;
                   j["beta"] = g.beta;
                 },
                 [&](const PlateauShape& p) {
                   j["sigma1"] = p.sigma1;
                   j["sigma2"] = p.sigma2;
                   j["theta"] = p.theta;
                   j["beta"] = p.beta;
                 },
                 [&](const SincShape& s) { j["omega_c"] = s.omega_c; },
             },
             spec.shape);
  return j;
}

KernelSpec kernel_from_json(const json& j) {
  const int size = j.at("size").get<int>();
  switch (parse_family(j.at("family").get<std::string>())) {
    case KernelFamily::kGaussian:
      return {size, GaussianShape{j.at("sigma1").get<double>(), j.at("sigma2").get<double>(),
                                  j.at("theta").get<double>()}};
    case KernelFamily::kGeneralizedGaussian:
      return {size, GeneralizedGaussianShape{j.at("sigma1").get<double>(),
                                             j.at("sigma2").get<double>(),
                                             j.at("theta").get<double>(), j.at("beta").get<double>()}};
    case KernelFamily::kPlateau:
      return {size, PlateauShape{j.at("sigma1").get<double>(), j.at("sigma2").get<double>(),
                                 j.at("theta").get<double>(), j.at("beta").get<double>()}};
    case KernelFamily::kSinc:
      return {size, SincShape{j.at("omega_c").get<double>()}};
  }
  throw std::invalid_argument("record: bad kernel");
}

json operation_json(const Operation& op) {
  return std::visit(
      Overloaded{
          [](const BlurOp& b) {
            json j = {{"op", "blur"}, {"stage", b.stage}, {"applied", b.kernel.has_value()}};
            if (b.kernel) j["kernel"] = kernel_json(*b.kernel);
            return j;
          },
          [](const ResizeOp& r) {
            json j = {{"op", "resize"},         {"stage", r.stage},   {"mode", mode_name(r.mode)},
                      {"height", r.height},     {"width", r.width},   {"to_target", r.to_target}};
            j["scale"] = r.scale ? json(*r.scale) : json(nullptr);
            return j;
          },
          [](const NoiseOp& n) {
            json j = {{"op", "noise"}, {"stage", n.stage}, {"seed", n.seed}};
            std::visit(Overloaded{
                           [&](const GaussianNoise& g) {
                             j["type"] = "gaussian";
                             j["sigma"] = g.sigma;
                             j["gray"] = g.gray;
                           },
                           [&](const PoissonNoise& p) {
                             j["type"] = "poisson";
                             j["scale"] = p.scale;
                             j["gray"] = p.gray;
                             j["photons"] = p.photons;
                           },
                       },
                       n.noise);
            return j;
          },
          [](const JpegOp& q) { return json{{"op", "jpeg"}, {"stage", q.stage}, {"quality", q.quality}}; },
          [](const SincOp& s) {
            json j = {{"op", "sinc"}, {"stage", s.stage}, {"applied", s.kernel.has_value()}};
            if (s.kernel) j["kernel"] = kernel_json(*s.kernel);
            return j;
          },
      },
      op);
}

Operation operation_from_json(const json& j) {
  const std::string kind = j.at("op").get<std::string>();
  const int stage = j.at("stage").get<int>();
  if (kind == "blur" || kind == "sinc") {
    std::optional<KernelSpec> kernel;
    if (j.at("applied").get<bool>()) kernel = kernel_from_json(j.at("kernel"));
    if (kind == "blur") return BlurOp{stage, kernel};
    return SincOp{stage, kernel};
  }
  if (kind == "resize") {
    ResizeOp r;
    r.stage = stage;
    r.mode = parse_mode(j.at("mode").get<std::string>());
    if (!j.at("scale").is_null()) r.scale = j.at("scale").get<double>();
    r.height = j.at("height").get<int>();
    r.width = j.at("width").get<int>();
    r.to_target = j.at("to_target").get<bool>();
    return r;
  }
  if (kind == "noise") {
    NoiseOp n;
    n.stage = stage;
    n.seed = j.at("seed").get<std::uint64_t>();
    const std::string type = j.at("type").get<std::string>();
    if (type == "gaussian") {
      n.noise = GaussianNoise{j.at("sigma").get<double>(), j.at("gray").get<bool>()};
    } else if (type == "poisson") {
      n.noise = PoissonNoise{j.at("scale").get<double>(), j.at("gray").get<bool>(),
                             j.at("photons").get<double>()};
    } else {
      require(false, "unknown noise type '" + type + "'");
    }
    return n;
  }
  if (kind == "jpeg") return JpegOp{stage, j.at("quality").get<double>()};
  require(false, "unknown operation '" + kind + "'");
  return {};
}

}  // namespace

json record_to_json(const DegradationRecord& rec) {
  json ops = json::array();
  for (const Operation& op : rec.operations) ops.push_back(operation_json(op));
  json j = {
      {"format", kRecordFormat},
      {"stream_seed", rec.stream_seed},
      {"hr", {{"height", rec.hr_height}, {"width", rec.hr_width}}},
      {"scale", rec.scale},
      {"order", rec.order},
      {"final_order", rec.final_sinc_first ? "sinc_then_jpeg" : "jpeg_then_sinc"},
      {"operations", ops},
  };
  if (rec.master_seed) j["master_seed"] = *rec.master_seed;
  if (rec.ordinal) j["ordinal"] = *rec.ordinal;
  if (rec.gt_sharpen) {
    j["gt_sharpen"] = {{"sigma", rec.gt_sharpen->sigma},
                       {"weight", rec.gt_sharpen->weight},
                       {"threshold", rec.gt_sharpen->threshold}};
  } else {
    j["gt_sharpen"] = nullptr;
  }
  return j;
}

DegradationRecord record_from_json(const json& j) {
  try {
    require(j.at("format").get<std::string>() == kRecordFormat, "unsupported format");
    DegradationRecord rec;
    rec.stream_seed = j.at("stream_seed").get<std::uint64_t>();
    if (j.contains("master_seed")) rec.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("ordinal")) rec.ordinal = j.at("ordinal").get<std::uint64_t>();
    rec.hr_height = j.at("hr").at("height").get<int>();
    rec.hr_width = j.at("hr").at("width").get<int>();
    rec.scale = j.at("scale").get<int>();
    rec.order = j.at("order").get<int>();
    const std::string order = j.at("final_order").get<std::string>();
    require(order == "sinc_then_jpeg" || order == "jpeg_then_sinc", "bad final_order");
    rec.final_sinc_first = order == "sinc_then_jpeg";
    const json& gt = j.at("gt_sharpen");
    if (!gt.is_null()) {
      rec.gt_sharpen = UsmParams{gt.at("sigma").get<double>(), gt.at("weight").get<double>(),
                                 gt.at("threshold").get<double>()};
    }
    for (const json& op : j.at("operations")) rec.operations.push_back(operation_from_json(op));
    return rec;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("record: ") + e.what());
  }
}

void save_record(const DegradationRecord& rec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << record_to_json(rec).dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

DegradationRecord load_record(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return record_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

}  // namespace degsynth
