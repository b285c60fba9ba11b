#pragma once

#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "her2/labels.hpp"
#include "her2/sidecar.hpp"
#include "her2/slide_grid.hpp"

namespace her2 {

enum class ModelRole { kTumor, kStain, kSegmenter };
enum class Backend { kBuiltinRule, kSidecar };

// Wire name of a role: "tumor", "stain", "segment".
std::string_view RoleWireName(ModelRole role);

struct ModelBinding {
  ModelRole role = ModelRole::kTumor;
  Backend backend = Backend::kBuiltinRule;
  int input_size_px = 512;
  std::optional<std::string> sidecar_command;

  // Throws kInvalidArgument when input_size_px <= 0 or a sidecar binding has
  // no command.
  void Validate() const;
};

// Defaults follow the model input sizes: 244 px for the H&E tumor
// classifier, 512 px for the IHC stain classifier and segmenter.
ModelBinding DefaultBinding(ModelRole role);

struct ModelBindings {
  ModelBinding tumor = DefaultBinding(ModelRole::kTumor);
  ModelBinding stain = DefaultBinding(ModelRole::kStain);
  ModelBinding segmenter = DefaultBinding(ModelRole::kSegmenter);
};

// Lazily spawned sidecar processes for one binding. Each handle is used by
// one caller at a time; at most `capacity` processes are started.
class SidecarPool {
 public:
  SidecarPool(std::string command, int capacity, SidecarOptions options);
  ~SidecarPool();

  class Lease {
   public:
    Lease(SidecarPool& pool, std::unique_ptr<SidecarHandle> handle)
        : pool_(&pool), handle_(std::move(handle)) {}
    Lease(Lease&&) = default;
    ~Lease();
    SidecarHandle& operator*() const { return *handle_; }
    SidecarHandle* operator->() const { return handle_.get(); }
    // Drops the process instead of returning it to the pool.
    void Discard();

   private:
    SidecarPool* pool_;
    std::unique_ptr<SidecarHandle> handle_;
  };

  Lease Acquire();
  void Shutdown();

 private:
  void Release(std::unique_ptr<SidecarHandle> handle);

  std::string command_;
  int capacity_;
  SidecarOptions options_;
  std::mutex mutex_;
  std::condition_variable available_;
  std::vector<std::unique_ptr<SidecarHandle>> idle_;
  int live_ = 0;
};

// Uniform front end over the three models. Patches are resized to each
// binding's input size before dispatch; label maps come back at patch size
// (nearest neighbour) with padded pixels forced to background.
class ModelGateway {
 public:
  explicit ModelGateway(ModelBindings bindings, int sidecar_pool_size = 1,
                        SidecarOptions options = {});
  ~ModelGateway();

  ModelGateway(const ModelGateway&) = delete;
  ModelGateway& operator=(const ModelGateway&) = delete;

  const ModelBindings& bindings() const noexcept { return bindings_; }

  TumorPrediction ClassifyTumor(const Patch& patch);
  StainPrediction ClassifyStain(const Patch& patch);
  LabelMap Segment(const Patch& patch);

  void Shutdown();

 private:
  nlohmann::json CallSidecar(ModelRole role, const RgbImage& input);
  SidecarPool& PoolFor(ModelRole role);

  ModelBindings bindings_;
  std::unique_ptr<SidecarPool> tumor_pool_;
  std::unique_ptr<SidecarPool> stain_pool_;
  std::unique_ptr<SidecarPool> segment_pool_;
};

}  // namespace her2
