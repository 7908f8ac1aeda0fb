// Copyright (c) 2026 The avbpo authors.
// SPDX-License-Identifier: Apache-2.0
//
// Domain types for audiovisual clips, JSON-Lines manifest I/O, and the
// synthetic homophone-world generator.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "avbpo/array_io.hpp"

namespace avbpo::corpus {

struct Transcript {
  std::vector<std::string> words;
  std::vector<bool> content_flags;  // true = content word, same length as words

  // Character tokens: lowercase words joined by a single separator (' ').
  // Derived, so the invariant "chars is a function of words" holds by
  // construction.
  std::string chars() const;

  bool operator==(const Transcript&) const = default;
};

void validate(const Transcript& t);

struct WordSpan {
  int64_t begin = 0;  // half-open frame interval [begin, end)
  int64_t end = 0;
  bool operator==(const WordSpan&) const = default;
};

struct AudioFeatures {
  Array frames;  // F x D
  double frame_rate_hz = 0.0;
  std::vector<WordSpan> word_spans;  // one per word, sorted, non-overlapping

  int64_t num_frames() const { return frames.dims.empty() ? 0 : frames.dims[0]; }
  int64_t feature_dim() const { return frames.dims.size() < 2 ? 0 : frames.dims[1]; }
  float at(int64_t f, int64_t d) const {
    return frames.data[static_cast<size_t>(f * feature_dim() + d)];
  }

  bool operator==(const AudioFeatures&) const = default;
};

void validate(const AudioFeatures& a, size_t n_words);

struct VideoFrames {
  // frames: M_raw x H x W x C, small integers stored as float (0..255).
  Array frames;
  std::vector<double> timestamps;  // strictly increasing, one per frame

  int64_t num_frames() const { return frames.dims.empty() ? 0 : frames.dims[0]; }
  int64_t height() const { return frames.dims.size() < 2 ? 0 : frames.dims[1]; }
  int64_t width() const { return frames.dims.size() < 3 ? 0 : frames.dims[2]; }
  int64_t channels() const { return frames.dims.size() < 4 ? 0 : frames.dims[3]; }
  int64_t frame_size() const { return height() * width() * channels(); }

  bool operator==(const VideoFrames&) const = default;
};

void validate(const VideoFrames& v);

struct ClipTriple {
  std::string id;
  AudioFeatures audio;
  VideoFrames video;
  Transcript transcript;
  std::optional<std::string> caption;
  std::string split;  // train | dev | test

  bool operator==(const ClipTriple&) const = default;
};

void validate(const ClipTriple& clip);

using Corpus = std::vector<ClipTriple>;

// ---------------------------------------------------------------------------
// Synthetic world

struct ScenePattern {
  // Rendered visual pattern for one scene and the words that scene favors.
  // The pattern is drawn on the left half of the frame so that horizontal
  // flipping destroys it.
  std::vector<uint8_t> blocks;  // per 4x4 block of the left half: 0 or 255
  std::vector<std::string> favored_words;
  bool operator==(const ScenePattern&) const = default;
};

struct SyntheticWorldSpec {
  // word -> content flag
  std::vector<std::pair<std::string, bool>> vocab;
  // pairs sharing one audio template but spelled differently
  std::vector<std::pair<std::string, std::string>> homophone_pairs;
  // word <-> filler/contraction variant; members share an audio template so
  // that only the scene can disambiguate them
  std::vector<std::pair<std::string, std::string>> spontaneous_variants;
  std::map<std::string, ScenePattern> scene_map;
  int64_t feature_dim = 16;
  int64_t frames_per_word = 4;
  double noise_sigma = 0.1;
  int64_t seed = 0;

  // layout of the synthetic video frames
  int64_t video_height = 16;
  int64_t video_width = 16;
  int64_t video_channels = 1;
  int64_t video_num_frames = 6;

  // sentence grammar knobs
  double p_homophone_slot = 0.85;
  double p_filler = 0.35;
  double p_aux = 0.5;
  double p_spontaneous = 0.35;
  double p_adverb = 0.4;
  double train_fraction = 0.8;
  double dev_fraction = 0.1;

  bool operator==(const SyntheticWorldSpec&) const = default;
};

void validate(const SyntheticWorldSpec& spec);

// The built-in world: 8 homophone pairs, 16 scenes (one per spelling), filler
// and contraction variants that share audio templates, lateralized scene
// glyphs. frames_per_word defaults to 6 here so every grammar sentence stays
// CTC-reachable at character level.
SyntheticWorldSpec default_world();

std::string world_spec_to_json(const SyntheticWorldSpec& spec);
SyntheticWorldSpec world_spec_from_json(const std::string& text);
void save_world_spec(const SyntheticWorldSpec& spec, const std::string& path);
SyntheticWorldSpec load_world_spec(const std::string& path);

// Pure function of (spec, n_clips, seed): per-clip substreams are derived as
// hash(seed, clip_index).
Corpus generate_corpus(const SyntheticWorldSpec& spec, int64_t n_clips,
                       uint64_t seed);

// The audio template of a word (shared across homophone-pair members and
// spontaneous-variant members). Exposed for tests of the ambiguity property.
std::vector<float> word_template(const SyntheticWorldSpec& spec,
                                 const std::string& word);

// ---------------------------------------------------------------------------
// Manifest I/O
//
// JSON-Lines index with one record per clip plus a schema header line;
// float arrays live in sidecar files referenced by relative path.

void save_manifest(const Corpus& corpus, const std::string& dir);
Corpus load_manifest(const std::string& dir);

inline const char* kManifestName = "manifest.jsonl";

}  // namespace avbpo::corpus
