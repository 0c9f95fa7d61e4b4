#pragma once

#include <chrono>
#include <cstdlib>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "semprosody/error.hpp"

// HTTP-JSON translation contract:
//   POST <path>  {"text": [...], "src": "en", "tgt": "zh"}
//   200          {"translations": [...]}   same length and order as "text"

namespace semprosody {

inline constexpr const char *kApiTokenEnv = "SEMPROSODY_API_TOKEN";

struct Endpoint {
  std::string scheme_host_port;
  std::string path;

  static Endpoint parse(const std::string &url) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos || url.substr(0, scheme) != "http")
      throw ConfigError("endpoint must be an http:// URL: " + url);
    const auto slash = url.find('/', scheme + 3);
    Endpoint e;
    e.scheme_host_port = url.substr(0, slash);
    e.path = slash == std::string::npos ? "/" : url.substr(slash);
    if (e.scheme_host_port.size() <= scheme + 3)
      throw ConfigError("endpoint has no host: " + url);
    return e;
  }
};

struct TranslateOptions {
  std::string endpoint;
  std::string src = "en";
  std::string tgt = "zh";
  std::size_t batch_size = 16;
  std::size_t attempts = 3;
  /// Delay before the second attempt; doubles after each failure.
  std::chrono::milliseconds backoff{200};
  std::chrono::seconds timeout{60};
  /// Batches in flight at once.
  std::size_t parallel = 1;
  /// Bearer token; empty sends no Authorization header.
  std::string token;
};

struct FailedBatch {
  /// Zero-based input line numbers in the batch.
  std::vector<std::size_t> lines;
  std::string error;
};

struct TranslateResult {
  /// One slot per input line, empty where the batch failed.
  std::vector<std::optional<std::string>> outputs;
  std::vector<FailedBatch> failed;

  bool complete() const { return failed.empty(); }
};

inline std::string token_from_env() {
  const char *v = std::getenv(kApiTokenEnv);
  return v ? v : "";
}

namespace detail {

/// One POST with no retry; throws RemoteError on any failure.
inline std::vector<std::string> post_batch(const Endpoint &ep,
                                           const std::vector<std::string> &texts,
                                           const TranslateOptions &opt) {
  httplib::Client client(ep.scheme_host_port);
  client.set_connection_timeout(opt.timeout);
  client.set_read_timeout(opt.timeout);
  client.set_write_timeout(opt.timeout);
  httplib::Headers headers;
  if (!opt.token.empty())
    headers.emplace("Authorization", "Bearer " + opt.token);
  const nlohmann::json body = {{"text", texts}, {"src", opt.src}, {"tgt", opt.tgt}};
  auto res = client.Post(ep.path, headers, body.dump(), "application/json");
  if (!res)
    throw RemoteError("request failed: " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw RemoteError("HTTP " + std::to_string(res->status));
  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error &) {
    throw RemoteError("response is not JSON");
  }
  if (!reply.contains("translations") || !reply["translations"].is_array())
    throw RemoteError("response has no \"translations\" array");
  const auto &arr = reply["translations"];
  if (arr.size() != texts.size())
    throw RemoteError("expected " + std::to_string(texts.size()) + " translations, got " +
                      std::to_string(arr.size()));
  std::vector<std::string> out;
  for (const auto &t : arr) {
    if (!t.is_string())
      throw RemoteError("translation is not a string");
    out.push_back(t.get<std::string>());
  }
  return out;
}

} // namespace detail

/// Translates the lines whose slot in `done` is empty (all lines when
/// `done` is empty), batching in input order. A batch is retried with
/// exponential backoff and then reported as failed; other batches proceed.
inline TranslateResult translate_remote(const std::vector<std::string> &lines,
                                        const TranslateOptions &opt,
                                        std::vector<std::optional<std::string>> done = {}) {
  if (opt.batch_size == 0)
    throw ConfigError("batch size must be positive");
  if (opt.attempts == 0)
    throw ConfigError("attempts must be positive");
  const auto ep = Endpoint::parse(opt.endpoint);
  TranslateResult result;
  result.outputs = done.empty() ? std::vector<std::optional<std::string>>(lines.size())
                                : std::move(done);
  if (result.outputs.size() != lines.size())
    throw DataError("resume state covers " + std::to_string(result.outputs.size()) +
                    " lines, input has " + std::to_string(lines.size()));

  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (result.outputs[i])
      continue;
    if (batches.empty() || batches.back().size() == opt.batch_size)
      batches.emplace_back();
    batches.back().push_back(i);
  }

  struct Outcome {
    std::vector<std::string> texts;
    std::string error;
  };
  auto run = [&](const std::vector<std::size_t> &idx) {
    std::vector<std::string> texts;
    for (auto i : idx)
      texts.push_back(lines[i]);
    auto delay = opt.backoff;
    Outcome out;
    for (std::size_t attempt = 0; attempt < opt.attempts; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(delay);
        delay *= 2;
      }
      try {
        out.texts = detail::post_batch(ep, texts, opt);
        out.error.clear();
        return out;
      } catch (const RemoteError &e) {
        out.error = e.what();
      }
    }
    return out;
  };

  const auto width = std::max<std::size_t>(1, opt.parallel);
  for (std::size_t start = 0; start < batches.size(); start += width) {
    const auto stop = std::min(batches.size(), start + width);
    std::vector<std::future<Outcome>> jobs;
    for (auto b = start; b < stop; ++b)
      jobs.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, run,
                                std::cref(batches[b])));
    for (auto b = start; b < stop; ++b) {
      auto out = jobs[b - start].get();
      const auto &idx = batches[b];
      if (!out.error.empty()) {
        result.failed.push_back({idx, out.error});
        continue;
      }
      for (std::size_t k = 0; k < idx.size(); ++k)
        result.outputs[idx[k]] = std::move(out.texts[k]);
    }
  }
  return result;
}

} // namespace semprosody
