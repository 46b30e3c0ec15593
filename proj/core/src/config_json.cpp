// Copyright 2026 The specjacobi Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "specjacobi/config_json.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace specjacobi {

using nlohmann::json;

namespace {

void require_object(const json& j, std::string_view what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + ": expected a JSON object");
}

void reject_unknown(const json& j, std::string_view what, std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw ConfigError(std::string(what) + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& j, std::string_view key, T& out, std::string_view what) {
  const auto it = j.find(std::string(key));
  if (it == j.end()) return;
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) throw ConfigError("");
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!is_non_negative_integer(*it)) throw ConfigError("");
    }
    out = it->template get<T>();
  } catch (const std::exception&) {
    throw ConfigError(std::string(what) + ": bad value for '" + std::string(key) + "'");
  }
}

std::vector<TokenId> read_tokens(const json& j, std::string_view what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array of token ids");
  std::vector<TokenId> out;
  for (const auto& t : j) {
    if (!is_non_negative_integer(t)) throw ConfigError(std::string(what) + ": token ids must be non-negative integers");
    out.push_back(t.get<TokenId>());
  }
  return out;
}

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::HashLogit ? "hash_logit" : "grid_ngram";
}

std::string_view to_string(CorpusRecipe recipe) {
  return recipe == CorpusRecipe::Rectangles ? "rectangles" : "constant";
}

}  // namespace

json model_spec_to_json(const ModelSpec& spec) {
  json j;
  j["kind"] = to_string(spec.kind);
  j["vocab_size"] = spec.vocab_size;
  if (spec.kind == ModelKind::HashLogit) {
    j["hash"] = {{"context_len", spec.hash.context_len},
                 {"sharpness", spec.hash.sharpness},
                 {"model_seed", spec.hash.model_seed}};
  } else {
    const auto& c = spec.ngram.corpus;
    j["ngram"] = {{"order", spec.ngram.order},
                  {"smoothing", spec.ngram.smoothing},
                  {"corpus",
                   {{"recipe", to_string(c.recipe)},
                    {"grid_count", c.grid_count},
                    {"grid_height", c.grid_height},
                    {"grid_width", c.grid_width},
                    {"rects_per_grid", c.rects_per_grid},
                    {"background", c.background},
                    {"corpus_seed", c.corpus_seed}}}};
  }
  if (spec.cfg) j["cfg"] = {{"weight", spec.cfg->weight}, {"uncond_context", spec.cfg->uncond_context}};
  return j;
}

ModelSpec model_spec_from_json(const json& j) {
  require_object(j, "model");
  reject_unknown(j, "model", {"kind", "vocab_size", "hash", "ngram", "cfg"});
  ModelSpec spec;
  std::string kind = "hash_logit";
  read(j, "kind", kind, "model");
  if (kind == "hash_logit") {
    spec.kind = ModelKind::HashLogit;
  } else if (kind == "grid_ngram") {
    spec.kind = ModelKind::GridNGram;
  } else {
    throw ConfigError("model: unknown kind '" + kind + "' (expected hash_logit|grid_ngram)");
  }
  read(j, "vocab_size", spec.vocab_size, "model");

  if (spec.kind == ModelKind::HashLogit && j.contains("ngram"))
    throw ConfigError("model: 'ngram' block given for a hash_logit model");
  if (spec.kind == ModelKind::GridNGram && j.contains("hash"))
    throw ConfigError("model: 'hash' block given for a grid_ngram model");

  if (const auto it = j.find("hash"); it != j.end()) {
    require_object(*it, "model.hash");
    reject_unknown(*it, "model.hash", {"context_len", "sharpness", "model_seed"});
    read(*it, "context_len", spec.hash.context_len, "model.hash");
    read(*it, "sharpness", spec.hash.sharpness, "model.hash");
    read(*it, "model_seed", spec.hash.model_seed, "model.hash");
  }
  if (const auto it = j.find("ngram"); it != j.end()) {
    require_object(*it, "model.ngram");
    reject_unknown(*it, "model.ngram", {"order", "smoothing", "corpus"});
    read(*it, "order", spec.ngram.order, "model.ngram");
    read(*it, "smoothing", spec.ngram.smoothing, "model.ngram");
    if (const auto c = it->find("corpus"); c != it->end()) {
      require_object(*c, "model.ngram.corpus");
      reject_unknown(*c, "model.ngram.corpus",
                     {"recipe", "grid_count", "grid_height", "grid_width", "rects_per_grid", "background",
                      "corpus_seed"});
      auto& corpus = spec.ngram.corpus;
      std::string recipe = "rectangles";
      read(*c, "recipe", recipe, "model.ngram.corpus");
      if (recipe == "rectangles") {
        corpus.recipe = CorpusRecipe::Rectangles;
      } else if (recipe == "constant") {
        corpus.recipe = CorpusRecipe::Constant;
      } else {
        throw ConfigError("model.ngram.corpus: unknown recipe '" + recipe + "'");
      }
      read(*c, "grid_count", corpus.grid_count, "model.ngram.corpus");
      read(*c, "grid_height", corpus.grid_height, "model.ngram.corpus");
      read(*c, "grid_width", corpus.grid_width, "model.ngram.corpus");
      read(*c, "rects_per_grid", corpus.rects_per_grid, "model.ngram.corpus");
      read(*c, "background", corpus.background, "model.ngram.corpus");
      read(*c, "corpus_seed", corpus.corpus_seed, "model.ngram.corpus");
    }
  }
  if (const auto it = j.find("cfg"); it != j.end() && !it->is_null()) {
    require_object(*it, "model.cfg");
    reject_unknown(*it, "model.cfg", {"weight", "uncond_context"});
    CfgParams cfg;
    read(*it, "weight", cfg.weight, "model.cfg");
    if (const auto u = it->find("uncond_context"); u != it->end())
      cfg.uncond_context = read_tokens(*u, "model.cfg.uncond_context");
    spec.cfg = std::move(cfg);
  }
  validate(spec);
  return spec;
}

json decode_config_to_json(const DecodeConfig& config) {
  json j;
  j["mode"] = to_string(config.mode);
  j["window"] = config.window;
  j["top_k"] = config.top_k;
  j["temperature"] = config.temperature;
  j["cfg_weight"] = config.cfg_weight ? json(*config.cfg_weight) : json(nullptr);
  j["reuse_threshold"] = config.reuse_threshold;
  j["init"] = to_string(config.init);
  j["grid"] = {{"height", config.grid.height}, {"width", config.grid.width}};
  j["prompt"] = config.prompt;
  j["seed"] = config.seed;
  j["refine"] = config.refine;
  return j;
}

DecodeConfig decode_config_from_json(const json& j, DecodeConfig base) {
  require_object(j, "decode");
  reject_unknown(j, "decode",
                 {"mode", "window", "top_k", "temperature", "cfg_weight", "reuse_threshold", "init", "grid",
                  "prompt", "seed", "refine"});
  DecodeConfig c = std::move(base);
  if (const auto it = j.find("mode"); it != j.end()) {
    if (!it->is_string()) throw ConfigError("decode: 'mode' must be a string");
    c.mode = parse_decode_mode(it->get<std::string>());
  }
  read(j, "window", c.window, "decode");
  read(j, "top_k", c.top_k, "decode");
  read(j, "temperature", c.temperature, "decode");
  if (const auto it = j.find("cfg_weight"); it != j.end()) {
    if (it->is_null()) {
      c.cfg_weight.reset();
    } else {
      double w = 0.0;
      read(j, "cfg_weight", w, "decode");
      c.cfg_weight = w;
    }
  }
  read(j, "reuse_threshold", c.reuse_threshold, "decode");
  if (const auto it = j.find("init"); it != j.end()) {
    if (!it->is_string()) throw ConfigError("decode: 'init' must be a string");
    c.init = parse_init_strategy(it->get<std::string>());
  }
  if (const auto it = j.find("grid"); it != j.end()) {
    if (it->is_string()) {
      c.grid = parse_grid(it->get<std::string>());
    } else {
      require_object(*it, "decode.grid");
      reject_unknown(*it, "decode.grid", {"height", "width"});
      read(*it, "height", c.grid.height, "decode.grid");
      read(*it, "width", c.grid.width, "decode.grid");
    }
  }
  if (const auto it = j.find("prompt"); it != j.end()) c.prompt = read_tokens(*it, "decode.prompt");
  read(j, "seed", c.seed, "decode");
  read(j, "refine", c.refine, "decode");
  return c;
}

ModelSpec model_preset(std::string_view name) {
  ModelSpec spec;
  if (name == "hash-sharp" || name == "hash-flat" || name == "hash-tiny") {
    spec.kind = ModelKind::HashLogit;
    spec.vocab_size = name == "hash-tiny" ? 4 : 16;
    spec.hash.context_len = 2;
    spec.hash.sharpness = name == "hash-sharp" ? 8.0 : name == "hash-flat" ? 1.0 : 3.0;
    return spec;
  }
  if (name == "grid-rects") {
    spec.kind = ModelKind::GridNGram;
    spec.vocab_size = 8;
    spec.ngram.order = 2;
    spec.ngram.smoothing = 0.01;
    spec.ngram.corpus = CorpusSpec{};
    return spec;
  }
  throw ConfigError("unknown model preset '" + std::string(name) + "'");
}

std::vector<std::string> model_preset_names() { return {"hash-sharp", "hash-flat", "hash-tiny", "grid-rects"}; }

ModelSpec resolve_model(std::string_view text) {
  auto parse = [](const std::string& s) {
    try {
      return json::parse(s);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("model: invalid JSON: ") + e.what());
    }
  };
  if (!text.empty() && text.front() == '{') return model_spec_from_json(parse(std::string(text)));
  const std::filesystem::path path{std::string(text)};
  std::error_code ec;
  if (std::filesystem::is_regular_file(path, ec)) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return model_spec_from_json(parse(buf.str()));
  }
  return model_preset(text);
}

bool is_non_negative_integer(const json& j) {
  return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

GridGeom parse_grid(std::string_view text) {
  const auto x = text.find('x');
  if (x == std::string_view::npos) throw ConfigError("grid: expected HxW, got '" + std::string(text) + "'");
  GridGeom g;
  const auto h = text.substr(0, x);
  const auto w = text.substr(x + 1);
  const auto rh = std::from_chars(h.data(), h.data() + h.size(), g.height);
  const auto rw = std::from_chars(w.data(), w.data() + w.size(), g.width);
  if (rh.ec != std::errc{} || rh.ptr != h.data() + h.size() || rw.ec != std::errc{} ||
      rw.ptr != w.data() + w.size() || g.height == 0 || g.width == 0)
    throw ConfigError("grid: expected HxW with positive integers, got '" + std::string(text) + "'");
  return g;
}

}  // namespace specjacobi
