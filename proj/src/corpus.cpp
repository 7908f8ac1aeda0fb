// Copyright (c) 2026 The avbpo authors.
// SPDX-License-Identifier: Apache-2.0

#include "avbpo/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "avbpo/common.hpp"
#include "avbpo/rng.hpp"

namespace avbpo::corpus {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Transcript::chars() const {
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out.push_back(' ');
    for (char c : words[i]) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

void validate(const Transcript& t) {
  if (t.words.empty()) {
    throw ValidationError("transcript has no words");
  }
  if (t.content_flags.size() != t.words.size()) {
    throw ValidationError("content_flags length does not match words");
  }
  for (const auto& w : t.words) {
    if (w.empty()) throw ValidationError("transcript contains an empty word");
  }
}

void validate(const AudioFeatures& a, size_t n_words) {
  if (a.frames.dims.size() != 2 || a.num_frames() < 1 || a.feature_dim() < 1) {
    throw ValidationError("audio frames must be a nonempty F x D matrix");
  }
  if (a.frame_rate_hz <= 0.0) {
    throw ValidationError("frame_rate_hz must be positive");
  }
  if (a.word_spans.size() != n_words) {
    throw ValidationError("word_spans must have one span per word");
  }
  int64_t prev_end = 0;
  for (const auto& s : a.word_spans) {
    if (s.begin < prev_end || s.end <= s.begin || s.end > a.num_frames()) {
      throw ValidationError("word_spans must be sorted, non-overlapping, within [0, F)");
    }
    prev_end = s.end;
  }
}

void validate(const VideoFrames& v) {
  if (v.frames.dims.size() != 4) {
    throw ValidationError("video frames must be M x H x W x C");
  }
  if (v.num_frames() < 1 || v.height() < 2 || v.width() < 2 || v.channels() < 1) {
    throw ValidationError("video must have >=1 frame of at least 2x2 pixels");
  }
  if (static_cast<int64_t>(v.timestamps.size()) != v.num_frames()) {
    throw ValidationError("timestamps must have one entry per frame");
  }
  for (size_t i = 1; i < v.timestamps.size(); ++i) {
    if (v.timestamps[i] <= v.timestamps[i - 1]) {
      throw ValidationError("timestamps must be strictly increasing");
    }
  }
}

void validate(const ClipTriple& clip) {
  if (clip.id.empty()) throw ValidationError("clip id is empty");
  if (clip.split != "train" && clip.split != "dev" && clip.split != "test") {
    throw ValidationError("clip split must be train|dev|test: " + clip.id);
  }
  validate(clip.transcript);
  validate(clip.audio, clip.transcript.words.size());
  validate(clip.video);
}

// ---------------------------------------------------------------------------
// Synthetic world

void validate(const SyntheticWorldSpec& spec) {
  if (spec.vocab.empty()) throw ValidationError("world vocab is empty");
  std::set<std::string> vocab_words;
  for (const auto& [w, flag] : spec.vocab) {
    (void)flag;
    if (w.empty()) throw ValidationError("world vocab contains an empty word");
    if (!vocab_words.insert(w).second) {
      throw ValidationError("duplicate vocab word: " + w);
    }
  }
  for (const auto& [a, b] : spec.homophone_pairs) {
    if (a == b) {
      throw ValidationError("homophone pair with identical spellings: " + a);
    }
    if (!vocab_words.count(a) || !vocab_words.count(b)) {
      throw ValidationError("homophone pair member not in vocab: " + a + "/" + b);
    }
  }
  for (const auto& [a, b] : spec.spontaneous_variants) {
    if (a == b) throw ValidationError("spontaneous variant maps word to itself: " + a);
  }
  std::set<std::string> homophone_words;
  for (const auto& [a, b] : spec.homophone_pairs) {
    homophone_words.insert(a);
    homophone_words.insert(b);
  }
  for (const auto& [scene, pat] : spec.scene_map) {
    bool hits_pair = false;
    for (const auto& w : pat.favored_words) {
      if (homophone_words.count(w)) hits_pair = true;
    }
    if (!hits_pair) {
      throw ValidationError("scene disambiguates no homophone pair: " + scene);
    }
  }
  if (spec.feature_dim < 1 || spec.frames_per_word < 1 || spec.noise_sigma <= 0.0) {
    throw ValidationError("feature_dim/frames_per_word must be >=1, noise_sigma > 0");
  }
  if (spec.video_height < 2 || spec.video_width < 2 || spec.video_channels < 1 ||
      spec.video_num_frames < 1) {
    throw ValidationError("invalid synthetic video geometry");
  }
  if (spec.train_fraction < 0 || spec.dev_fraction < 0 ||
      spec.train_fraction + spec.dev_fraction > 1.0) {
    throw ValidationError("invalid split fractions");
  }
}

namespace {

// Every ambiguity group (homophone pair, spontaneous-variant pair) shares one
// audio template; the template key is the group, not the word.
std::string audio_class(const SyntheticWorldSpec& spec, const std::string& word) {
  for (const auto& [a, b] : spec.homophone_pairs) {
    if (word == a || word == b) return "hp:" + a + "|" + b;
  }
  for (const auto& [a, b] : spec.spontaneous_variants) {
    if (word == a || word == b) return "sv:" + a + "|" + b;
  }
  return "w:" + word;
}

std::vector<std::string> favored_of(const ScenePattern& pat,
                                    const std::set<std::string>& universe) {
  std::vector<std::string> out;
  for (const auto& w : pat.favored_words) {
    if (universe.count(w)) out.push_back(w);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<float> word_template(const SyntheticWorldSpec& spec,
                                 const std::string& word) {
  Rng rng(hash_combine(hash_combine(static_cast<uint64_t>(spec.seed), 0x7e3full),
                       audio_class(spec, word)));
  std::vector<float> t(static_cast<size_t>(spec.feature_dim));
  for (auto& x : t) x = static_cast<float>(rng.gaussian());
  return t;
}

SyntheticWorldSpec default_world() {
  SyntheticWorldSpec spec;
  spec.feature_dim = 16;
  spec.frames_per_word = 6;
  spec.noise_sigma = 0.1;
  spec.seed = 0;

  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"dye", "die"},   {"sun", "son"},   {"won", "one"},  {"too", "two"},
      {"blew", "blue"}, {"maid", "made"}, {"pale", "pail"}, {"tide", "tied"}};
  spec.homophone_pairs = pairs;
  spec.spontaneous_variants = {{"uh", "um"}, {"kinda", "sorta"}};

  auto add = [&](const std::string& w, bool content) {
    spec.vocab.emplace_back(w, content);
  };
  for (const auto& [a, b] : pairs) {
    add(a, true);
    add(b, true);
  }
  for (const std::string& w : {"use", "get", "put", "find"}) add(w, true);
  for (const std::string& w : {"cup", "box", "pot", "jar"}) add(w, true);
  for (const std::string& w :
       {"we", "you", "they", "i", "the", "a", "can", "must", "now", "then"}) {
    add(w, false);
  }
  add("uh", false);
  add("um", false);
  add("kinda", false);
  add("sorta", false);

  // Two scenes per homophone pair, one per spelling. Scene k favors spelling
  // k%2 of pair k/2 plus the matching filler and modifier variants, and its
  // glyph encodes k+1 in binary across the left-half 4x4 blocks.
  const std::vector<std::string> fillers = {"uh", "um"};
  const std::vector<std::string> modifiers = {"kinda", "sorta"};
  const int64_t n_scenes = static_cast<int64_t>(pairs.size()) * 2;
  const int64_t blocks_per_scene =
      (spec.video_height / 4) * (spec.video_width / 2 / 4);
  for (int64_t k = 0; k < n_scenes; ++k) {
    ScenePattern pat;
    pat.blocks.resize(static_cast<size_t>(blocks_per_scene), 0);
    for (int64_t b = 0; b < blocks_per_scene; ++b) {
      if (((k + 1) >> b) & 1) pat.blocks[static_cast<size_t>(b)] = 255;
    }
    const auto& pair = pairs[static_cast<size_t>(k / 2)];
    pat.favored_words = {k % 2 == 0 ? pair.first : pair.second,
                         fillers[static_cast<size_t>(k % 2)],
                         modifiers[static_cast<size_t>(k % 2)]};
    std::ostringstream name;
    name << "scene" << (k < 10 ? "0" : "") << k;
    spec.scene_map[name.str()] = pat;
  }
  return spec;
}

Corpus generate_corpus(const SyntheticWorldSpec& spec, int64_t n_clips,
                       uint64_t seed) {
  validate(spec);
  if (n_clips < 0) throw ValidationError("n_clips must be >= 0");

  std::vector<std::string> scene_ids;
  for (const auto& [name, pat] : spec.scene_map) scene_ids.push_back(name);

  std::set<std::string> homophone_words;
  for (const auto& [a, b] : spec.homophone_pairs) {
    homophone_words.insert(a);
    homophone_words.insert(b);
  }
  std::map<std::string, bool> content_of;
  std::vector<std::string> verbs, nouns, subjects, auxiliaries, adverbs, dets;
  for (const auto& [w, content] : spec.vocab) content_of[w] = content;

  // Grammar roles for the built-in vocabulary; words outside these lists
  // only appear through scenes or homophone slots.
  auto have = [&](const std::string& w) { return content_of.count(w) > 0; };
  for (const std::string& w : {"use", "get", "put", "find"})
    if (have(w)) verbs.push_back(w);
  for (const std::string& w : {"cup", "box", "pot", "jar"})
    if (have(w)) nouns.push_back(w);
  for (const std::string& w : {"we", "you", "they", "i"})
    if (have(w)) subjects.push_back(w);
  for (const std::string& w : {"can", "must"})
    if (have(w)) auxiliaries.push_back(w);
  for (const std::string& w : {"now", "then"})
    if (have(w)) adverbs.push_back(w);
  for (const std::string& w : {"the", "a"})
    if (have(w)) dets.push_back(w);
  if (verbs.empty() || nouns.empty() || subjects.empty() || dets.empty()) {
    throw ValidationError("world vocab lacks grammar roles (verb/noun/subject/det)");
  }

  // split boundaries by index: exact counts, content independent of index
  const int64_t n_train = static_cast<int64_t>(spec.train_fraction * static_cast<double>(n_clips) + 0.5);
  const int64_t n_dev = static_cast<int64_t>(spec.dev_fraction * static_cast<double>(n_clips) + 0.5);

  Corpus out;
  out.reserve(static_cast<size_t>(n_clips));
  for (int64_t i = 0; i < n_clips; ++i) {
    Rng rng(hash_combine(seed, static_cast<uint64_t>(i)));
    const std::string& scene = scene_ids[rng.uniform_int(scene_ids.size())];
    const ScenePattern& pat = spec.scene_map.at(scene);

    const auto favored_homophones = favored_of(pat, homophone_words);

    ClipTriple clip;
    {
      std::ostringstream id;
      id << "clip" << std::setw(6) << std::setfill('0') << i;
      clip.id = id.str();
    }
    clip.split = i < n_train ? "train" : (i < n_train + n_dev ? "dev" : "test");

    // sentence: subj [variants...] [aux] verb det slot|noun [adv]
    auto& words = clip.transcript.words;
    words.push_back(subjects[rng.uniform_int(subjects.size())]);
    for (const auto& [a, b] : spec.spontaneous_variants) {
      std::string pick;
      for (const auto& w : pat.favored_words) {
        if (w == a || w == b) pick = w;
      }
      if (!pick.empty() && rng.bernoulli(spec.p_filler)) words.push_back(pick);
    }
    if (!auxiliaries.empty() && rng.bernoulli(spec.p_aux)) {
      words.push_back(auxiliaries[rng.uniform_int(auxiliaries.size())]);
    }
    words.push_back(verbs[rng.uniform_int(verbs.size())]);
    words.push_back(dets[rng.uniform_int(dets.size())]);
    if (!favored_homophones.empty() && rng.bernoulli(spec.p_homophone_slot)) {
      words.push_back(favored_homophones[rng.uniform_int(favored_homophones.size())]);
    } else {
      words.push_back(nouns[rng.uniform_int(nouns.size())]);
    }
    if (!adverbs.empty() && rng.bernoulli(spec.p_adverb)) {
      words.push_back(adverbs[rng.uniform_int(adverbs.size())]);
    }
    for (const auto& w : words) {
      auto it = content_of.find(w);
      clip.transcript.content_flags.push_back(it != content_of.end() && it->second);
    }

    // audio: per-word template + gaussian noise, contiguous spans
    const int64_t fpw = spec.frames_per_word;
    const int64_t n_frames = static_cast<int64_t>(words.size()) * fpw;
    clip.audio.frames.dims = {n_frames, spec.feature_dim};
    clip.audio.frames.data.resize(static_cast<size_t>(n_frames * spec.feature_dim));
    clip.audio.frame_rate_hz = 25.0;
    int64_t f = 0;
    for (const auto& w : words) {
      const auto tmpl = word_template(spec, w);
      clip.audio.word_spans.push_back({f, f + fpw});
      for (int64_t k = 0; k < fpw; ++k, ++f) {
        for (int64_t d = 0; d < spec.feature_dim; ++d) {
          clip.audio.frames.data[static_cast<size_t>(f * spec.feature_dim + d)] =
              tmpl[static_cast<size_t>(d)] +
              static_cast<float>(rng.gaussian(0.0, spec.noise_sigma));
        }
      }
    }

    // video: the scene glyph on the left half, constant across frames
    const int64_t H = spec.video_height, W = spec.video_width, C = spec.video_channels;
    clip.video.frames.dims = {spec.video_num_frames, H, W, C};
    clip.video.frames.data.assign(
        static_cast<size_t>(spec.video_num_frames * H * W * C), 0.0f);
    const int64_t block_cols = W / 2 / 4;
    for (int64_t m = 0; m < spec.video_num_frames; ++m) {
      clip.video.timestamps.push_back(0.2 * static_cast<double>(m));
      for (int64_t y = 0; y < H; ++y) {
        for (int64_t x = 0; x < W / 2; ++x) {
          const int64_t block = (y / 4) * block_cols + (x / 4);
          if (block >= static_cast<int64_t>(pat.blocks.size())) continue;
          const float v = static_cast<float>(pat.blocks[static_cast<size_t>(block)]);
          for (int64_t c = 0; c < C; ++c) {
            clip.video.frames.data[static_cast<size_t>(
                ((m * H + y) * W + x) * C + c)] = v;
          }
        }
      }
    }

    // caption lists the scene's favored words
    std::ostringstream cap;
    cap << "the scene shows: ";
    for (size_t k = 0; k < pat.favored_words.size(); ++k) {
      if (k > 0) cap << ", ";
      cap << pat.favored_words[k];
    }
    clip.caption = cap.str();

    validate(clip);
    out.push_back(std::move(clip));
  }
  return out;
}

// ---------------------------------------------------------------------------
// World spec JSON

std::string world_spec_to_json(const SyntheticWorldSpec& spec) {
  json j;
  j["vocab"] = json::array();
  for (const auto& [w, c] : spec.vocab) j["vocab"].push_back({{"word", w}, {"content", c}});
  j["homophone_pairs"] = json::array();
  for (const auto& [a, b] : spec.homophone_pairs) j["homophone_pairs"].push_back({a, b});
  j["spontaneous_variants"] = json::array();
  for (const auto& [a, b] : spec.spontaneous_variants)
    j["spontaneous_variants"].push_back({a, b});
  j["scene_map"] = json::object();
  for (const auto& [name, pat] : spec.scene_map) {
    j["scene_map"][name] = {{"blocks", pat.blocks}, {"favored_words", pat.favored_words}};
  }
  j["feature_dim"] = spec.feature_dim;
  j["frames_per_word"] = spec.frames_per_word;
  j["noise_sigma"] = spec.noise_sigma;
  j["seed"] = spec.seed;
  j["video_height"] = spec.video_height;
  j["video_width"] = spec.video_width;
  j["video_channels"] = spec.video_channels;
  j["video_num_frames"] = spec.video_num_frames;
  j["p_homophone_slot"] = spec.p_homophone_slot;
  j["p_filler"] = spec.p_filler;
  j["p_aux"] = spec.p_aux;
  j["p_spontaneous"] = spec.p_spontaneous;
  j["p_adverb"] = spec.p_adverb;
  j["train_fraction"] = spec.train_fraction;
  j["dev_fraction"] = spec.dev_fraction;
  return j.dump(2);
}

SyntheticWorldSpec world_spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad world spec JSON: ") + e.what());
  }
  SyntheticWorldSpec spec;
  try {
    for (const auto& v : j.at("vocab")) {
      spec.vocab.emplace_back(v.at("word").get<std::string>(), v.at("content").get<bool>());
    }
    for (const auto& p : j.at("homophone_pairs")) {
      spec.homophone_pairs.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
    }
    for (const auto& p : j.at("spontaneous_variants")) {
      spec.spontaneous_variants.emplace_back(p.at(0).get<std::string>(),
                                             p.at(1).get<std::string>());
    }
    for (const auto& [name, pj] : j.at("scene_map").items()) {
      ScenePattern pat;
      pat.blocks = pj.at("blocks").get<std::vector<uint8_t>>();
      pat.favored_words = pj.at("favored_words").get<std::vector<std::string>>();
      spec.scene_map[name] = pat;
    }
    spec.feature_dim = j.at("feature_dim").get<int64_t>();
    spec.frames_per_word = j.at("frames_per_word").get<int64_t>();
    spec.noise_sigma = j.at("noise_sigma").get<double>();
    spec.seed = j.at("seed").get<int64_t>();
    spec.video_height = j.value("video_height", spec.video_height);
    spec.video_width = j.value("video_width", spec.video_width);
    spec.video_channels = j.value("video_channels", spec.video_channels);
    spec.video_num_frames = j.value("video_num_frames", spec.video_num_frames);
    spec.p_homophone_slot = j.value("p_homophone_slot", spec.p_homophone_slot);
    spec.p_filler = j.value("p_filler", spec.p_filler);
    spec.p_aux = j.value("p_aux", spec.p_aux);
    spec.p_spontaneous = j.value("p_spontaneous", spec.p_spontaneous);
    spec.p_adverb = j.value("p_adverb", spec.p_adverb);
    spec.train_fraction = j.value("train_fraction", spec.train_fraction);
    spec.dev_fraction = j.value("dev_fraction", spec.dev_fraction);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad world spec JSON: ") + e.what());
  }
  validate(spec);
  return spec;
}

void save_world_spec(const SyntheticWorldSpec& spec, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for write: " + path);
  os << world_spec_to_json(spec) << "\n";
}

SyntheticWorldSpec load_world_spec(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open world spec: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return world_spec_from_json(ss.str());
}

// ---------------------------------------------------------------------------
// Manifest I/O

void save_manifest(const Corpus& corpus, const std::string& dir) {
  fs::create_directories(fs::path(dir) / "arrays");
  std::ofstream os(fs::path(dir) / kManifestName);
  if (!os) throw IoError("cannot open manifest for write in " + dir);
  os << json{{"schema_version", 1}}.dump() << "\n";
  for (const auto& clip : corpus) {
    const std::string audio_rel = "arrays/" + clip.id + ".audio.bin";
    const std::string video_rel = "arrays/" + clip.id + ".video.bin";
    write_array((fs::path(dir) / audio_rel).string(), clip.audio.frames);
    write_array((fs::path(dir) / video_rel).string(), clip.video.frames);

    json rec;
    rec["id"] = clip.id;
    rec["split"] = clip.split;
    rec["transcript"] = {{"words", clip.transcript.words},
                         {"content_flags", clip.transcript.content_flags}};
    rec["audio_file"] = audio_rel;
    rec["frame_rate_hz"] = clip.audio.frame_rate_hz;
    json spans = json::array();
    for (const auto& s : clip.audio.word_spans) spans.push_back({s.begin, s.end});
    rec["word_spans"] = spans;
    rec["video_file"] = video_rel;
    rec["timestamps"] = clip.video.timestamps;
    if (clip.caption) {
      rec["caption"] = *clip.caption;
    } else {
      rec["caption"] = nullptr;
    }
    os << rec.dump() << "\n";
  }
  if (!os) throw IoError("manifest write failed in " + dir);
}

Corpus load_manifest(const std::string& dir) {
  std::ifstream is(fs::path(dir) / kManifestName);
  if (!is) throw IoError("missing manifest in " + dir);
  std::string line;
  Corpus out;
  std::set<std::string> seen_ids;
  bool saw_header = false;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw IoError("bad manifest line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!saw_header) {
      if (!rec.contains("schema_version")) {
        throw IoError("manifest missing schema_version header in " + dir);
      }
      if (rec["schema_version"].get<int>() != 1) {
        throw IoError("unsupported manifest schema_version " +
                      rec["schema_version"].dump() + " in " + dir);
      }
      saw_header = true;
      continue;
    }
    ClipTriple clip;
    try {
      clip.id = rec.at("id").get<std::string>();
      clip.split = rec.at("split").get<std::string>();
      clip.transcript.words = rec.at("transcript").at("words").get<std::vector<std::string>>();
      clip.transcript.content_flags =
          rec.at("transcript").at("content_flags").get<std::vector<bool>>();
      clip.audio.frame_rate_hz = rec.at("frame_rate_hz").get<double>();
      for (const auto& s : rec.at("word_spans")) {
        clip.audio.word_spans.push_back({s.at(0).get<int64_t>(), s.at(1).get<int64_t>()});
      }
      clip.video.timestamps = rec.at("timestamps").get<std::vector<double>>();
      if (!rec.at("caption").is_null()) clip.caption = rec.at("caption").get<std::string>();

      if (!seen_ids.insert(clip.id).second) {
        throw IoError("duplicate clip id in manifest: " + clip.id);
      }
      try {
        clip.audio.frames = read_array((fs::path(dir) / rec.at("audio_file").get<std::string>()).string());
        clip.video.frames = read_array((fs::path(dir) / rec.at("video_file").get<std::string>()).string());
      } catch (const IoError& e) {
        throw IoError(std::string(e.what()) + " (clip " + clip.id + ")");
      }
      validate(clip);
    } catch (const json::exception& e) {
      throw IoError("bad manifest record for line " + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(std::move(clip));
  }
  return out;
}

}  // namespace avbpo::corpus
