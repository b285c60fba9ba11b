#include "her2/model_gateway.hpp"

#include <cmath>

#include "her2/builtin_rules.hpp"
#include "her2/error.hpp"

namespace her2 {

// Sidecar probabilities typically come from float32 softmax output, so the
// sum check is looser than the in-process invariant and the values are
// renormalized afterwards.
inline constexpr double kSidecarSumTolerance = 1e-4;

std::string_view RoleWireName(ModelRole role) {
  switch (role) {
    case ModelRole::kTumor: return "tumor";
    case ModelRole::kStain: return "stain";
    case ModelRole::kSegmenter: return "segment";
  }
  return "?";
}

void ModelBinding::Validate() const {
  if (input_size_px <= 0) {
    Fail(ErrorKind::kInvalidArgument, "input_size_px must be positive");
  }
  if (backend == Backend::kSidecar && (!sidecar_command || sidecar_command->empty())) {
    Fail(ErrorKind::kInvalidArgument, "sidecar binding for role '" +
                                          std::string(RoleWireName(role)) +
                                          "' requires a command");
  }
}

ModelBinding DefaultBinding(ModelRole role) {
  return {role, Backend::kBuiltinRule, role == ModelRole::kTumor ? 244 : 512,
          std::nullopt};
}

SidecarPool::SidecarPool(std::string command, int capacity, SidecarOptions options)
    : command_(std::move(command)), capacity_(std::max(1, capacity)), options_(options) {}

SidecarPool::~SidecarPool() { Shutdown(); }

SidecarPool::Lease::~Lease() {
  if (!handle_) return;
  if (handle_->healthy()) {
    pool_->Release(std::move(handle_));
  } else {
    Discard();
  }
}

void SidecarPool::Lease::Discard() {
  if (!handle_) return;
  handle_->Shutdown();
  handle_.reset();
  std::lock_guard lock(pool_->mutex_);
  --pool_->live_;
  pool_->available_.notify_one();
}

SidecarPool::Lease SidecarPool::Acquire() {
  std::unique_lock lock(mutex_);
  available_.wait(lock, [&] { return !idle_.empty() || live_ < capacity_; });
  if (!idle_.empty()) {
    auto handle = std::move(idle_.back());
    idle_.pop_back();
    return Lease(*this, std::move(handle));
  }
  ++live_;
  lock.unlock();
  try {
    return Lease(*this, SidecarHandle::Spawn(command_, options_));
  } catch (...) {
    lock.lock();
    --live_;
    available_.notify_one();
    throw;
  }
}

void SidecarPool::Release(std::unique_ptr<SidecarHandle> handle) {
  std::lock_guard lock(mutex_);
  idle_.push_back(std::move(handle));
  available_.notify_one();
}

void SidecarPool::Shutdown() {
  std::lock_guard lock(mutex_);
  for (auto& handle : idle_) handle->Shutdown();
  live_ -= static_cast<int>(idle_.size());
  idle_.clear();
}

ModelGateway::ModelGateway(ModelBindings bindings, int sidecar_pool_size,
                           SidecarOptions options)
    : bindings_(std::move(bindings)) {
  auto make_pool = [&](const ModelBinding& b, ModelRole expected) {
    if (b.role != expected) {
      Fail(ErrorKind::kInvalidArgument, "binding role mismatch for '" +
                                            std::string(RoleWireName(expected)) + "'");
    }
    b.Validate();
    return b.backend == Backend::kSidecar
               ? std::make_unique<SidecarPool>(*b.sidecar_command, sidecar_pool_size,
                                               options)
               : nullptr;
  };
  tumor_pool_ = make_pool(bindings_.tumor, ModelRole::kTumor);
  stain_pool_ = make_pool(bindings_.stain, ModelRole::kStain);
  segment_pool_ = make_pool(bindings_.segmenter, ModelRole::kSegmenter);
}

ModelGateway::~ModelGateway() { Shutdown(); }

void ModelGateway::Shutdown() {
  for (auto* pool : {tumor_pool_.get(), stain_pool_.get(), segment_pool_.get()}) {
    if (pool) pool->Shutdown();
  }
}

SidecarPool& ModelGateway::PoolFor(ModelRole role) {
  switch (role) {
    case ModelRole::kTumor: return *tumor_pool_;
    case ModelRole::kStain: return *stain_pool_;
    case ModelRole::kSegmenter: return *segment_pool_;
  }
  Fail(ErrorKind::kInvalidArgument, "unknown role");
}

nlohmann::json ModelGateway::CallSidecar(ModelRole role, const RgbImage& input) {
  const std::string_view wire = RoleWireName(role);
  auto lease = PoolFor(role).Acquire();
  if (!lease->serves(wire)) {
    Fail(ErrorKind::kBackendUnavailable,
         "sidecar does not serve role '" + std::string(wire) + "'");
  }
  return lease->Call(wire, input.width(), input.height(), input.pixels());
}

namespace {

void RequireModality(const Patch& patch, Modality expected, std::string_view op) {
  if (patch.modality != expected) {
    Fail(ErrorKind::kInvalidArgument,
         std::string(op) + " expects a " + std::string(ModalityName(expected)) +
             " patch, got " + std::string(ModalityName(patch.modality)));
  }
}

RgbImage ModelInput(const Patch& patch, const ModelBinding& binding) {
  return ResizeBilinear(patch.pixels, binding.input_size_px, binding.input_size_px);
}

template <std::size_t N, typename ParseFn>
std::array<double, N> ParseProbabilities(const nlohmann::json& response, ParseFn parse) {
  const auto it = response.find("probabilities");
  if (it == response.end() || !it->is_object()) {
    Fail(ErrorKind::kProtocolViolation, "classify response lacks a probabilities object");
  }
  std::array<double, N> p{};
  double sum = 0.0;
  for (const auto& item : it->items()) {
    const std::string& name = item.key();
    const auto& value = item.value();
    std::size_t index = 0;
    try {
      index = static_cast<std::size_t>(parse(name));
    } catch (const Error&) {
      Fail(ErrorKind::kProtocolViolation, "unknown label '" + name + "' in response");
    }
    if (!value.is_number()) {
      Fail(ErrorKind::kProtocolViolation, "probability for '" + name + "' is not a number");
    }
    const double v = value.template get<double>();
    if (!(v >= 0.0 && v <= 1.0)) {
      Fail(ErrorKind::kProtocolViolation, "probability for '" + name + "' outside [0,1]");
    }
    p[index] = v;
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSidecarSumTolerance) {
    Fail(ErrorKind::kProtocolViolation, "probabilities do not sum to 1");
  }
  for (double& v : p) v /= sum;
  return p;
}

}  // namespace

TumorPrediction ModelGateway::ClassifyTumor(const Patch& patch) {
  RequireModality(patch, Modality::kHE, "tumor classification");
  const RgbImage input = ModelInput(patch, bindings_.tumor);
  if (bindings_.tumor.backend == Backend::kBuiltinRule) return rules::ClassifyTumor(input);
  const auto response = CallSidecar(ModelRole::kTumor, input);
  return MakeTumorPrediction(
      ParseProbabilities<kTumorLabelCount>(response, ParseTumorLabel), 1e-9);
}

StainPrediction ModelGateway::ClassifyStain(const Patch& patch) {
  RequireModality(patch, Modality::kIHC, "stain classification");
  const RgbImage input = ModelInput(patch, bindings_.stain);
  if (bindings_.stain.backend == Backend::kBuiltinRule) return rules::ClassifyStain(input);
  const auto response = CallSidecar(ModelRole::kStain, input);
  return MakeStainPrediction(
      ParseProbabilities<kStainLabelCount>(response, ParseStainLabel), 1e-9);
}

LabelMap ModelGateway::Segment(const Patch& patch) {
  RequireModality(patch, Modality::kIHC, "segmentation");
  const ModelBinding& binding = bindings_.segmenter;
  const RgbImage input = ModelInput(patch, binding);

  std::vector<std::uint8_t> labels;
  if (binding.backend == Backend::kBuiltinRule) {
    const LabelMap map = rules::Segment(input);
    labels.assign(map.labels().begin(), map.labels().end());
  } else {
    const auto response = CallSidecar(ModelRole::kSegmenter, input);
    const auto it = response.find("labels_b64");
    if (it == response.end() || !it->is_string()) {
      Fail(ErrorKind::kProtocolViolation, "segment response lacks labels_b64");
    }
    labels = Base64Decode(it->get<std::string>());
    if (labels.size() != static_cast<std::size_t>(input.width()) * input.height()) {
      Fail(ErrorKind::kProtocolViolation, "label map has wrong length");
    }
    for (std::uint8_t v : labels) {
      if (v > kMaxPixelLabel) {
        Fail(ErrorKind::kProtocolViolation,
             "label value " + std::to_string(v) + " outside {0..4}");
      }
    }
  }

  labels = ResizeNearest(labels, input.width(), input.height(), patch.pixels.width(),
                         patch.pixels.height());
  LabelMap out(patch.pixels.width(), patch.pixels.height(), std::move(labels));
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      if (x >= patch.content_width() || y >= patch.content_height()) out.set(x, y, 0);
    }
  }
  return out;
}

}  // namespace her2
