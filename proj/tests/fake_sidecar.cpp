// Scriptable stand-in for the inference sidecar used by the protocol tests.
//
//   fake_sidecar <mode> [roles...]
//
// Modes: rule, version2, silent, echo, bad-labels, error, crash, wrong-id,
// garbage.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "her2/builtin_rules.hpp"
#include "her2/labels.hpp"
#include "her2/sidecar.hpp"
#include "json.hpp"

using nlohmann::ordered_json;

namespace {

ordered_json TumorJson(const her2::TumorPrediction& p) {
  ordered_json probs;
  for (int i = 0; i < 2; ++i) {
    probs[std::string(her2::TumorLabelName(static_cast<her2::TumorLabel>(i)))] =
        p.probabilities[i];
  }
  return probs;
}

ordered_json StainJson(const her2::StainPrediction& p) {
  ordered_json probs;
  for (int i = 0; i < 4; ++i) {
    probs[std::string(her2::StainLabelName(static_cast<her2::StainLabel>(i)))] =
        p.probabilities[i];
  }
  return probs;
}

void Emit(const ordered_json& j) {
  std::cout << j.dump() << '\n' << std::flush;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "rule";
  std::vector<std::string> roles;
  for (int i = 2; i < argc; ++i) roles.emplace_back(argv[i]);
  if (roles.empty()) roles = {"tumor", "stain", "segment"};

  if (mode == "silent") {
    std::this_thread::sleep_for(std::chrono::seconds(30));
    return 0;
  }
  std::cerr << "fake sidecar starting in mode " << mode << std::endl;
  Emit({{"protocol", "her2-sidecar"}, {"version", mode == "version2" ? 2 : 1}, {"roles", roles}});

  std::string line;
  while (std::getline(std::cin, line)) {
    const auto req = nlohmann::json::parse(line);
    const auto id = req.at("id");
    const std::string role = req.at("role");
    const int w = req.at("width");
    const int h = req.at("height");
    const auto bytes = her2::Base64Decode(req.at("pixels_b64").get<std::string>());
    const her2::RgbImage image(w, h, bytes);

    if (mode == "crash") {
      std::cerr << "Traceback: CUDA out of memory" << std::endl;
      return 3;
    }
    if (mode == "error") {
      Emit({{"id", id}, {"error", "model exploded"}});
      continue;
    }
    if (mode == "garbage") {
      std::cout << "this is not json\n" << std::flush;
      continue;
    }
    ordered_json resp{{"id", mode == "wrong-id" ? id.get<std::int64_t>() + 1 : id.get<std::int64_t>()}};
    if (role == "tumor") {
      resp["probabilities"] = TumorJson(her2::rules::ClassifyTumor(image));
    } else if (role == "stain") {
      resp["probabilities"] = StainJson(her2::rules::ClassifyStain(image));
    } else {
      std::vector<std::uint8_t> labels(static_cast<std::size_t>(w) * h);
      if (mode == "echo") {
        // Label = red channel mod 5, so resize round trips are observable.
        for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = bytes[i * 3] % 5;
      } else if (mode == "bad-labels") {
        for (auto& l : labels) l = 7;
      } else {
        const her2::LabelMap map = her2::rules::Segment(image);
        labels.assign(map.labels().begin(), map.labels().end());
      }
      resp["labels_b64"] = her2::Base64Encode(labels);
    }
    Emit(resp);
  }
  return 0;
}
