#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace topicdyn {

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Minimal GET transport so the client can run against recorded responses.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  /// Throws on connection failure.
  virtual HttpResponse get(const std::string& host, const std::string& target,
                           const std::map<std::string, std::string>& headers) = 0;
};

/// HTTPS transport backed by cpp-httplib. Throws FetchError when the library
/// was built without TLS support.
std::shared_ptr<HttpTransport> make_https_transport();

struct MediaWikiOptions {
  std::string host = "en.wikipedia.org";
  std::string api_path = "/w/api.php";
  std::string user_agent = "topicdyn/1.0 (topic dynamics toolkit; synthetic corpus builder)";
  int max_retries = 3;
  std::chrono::milliseconds backoff{500};  // doubled after every failed attempt
  std::chrono::milliseconds min_interval{200};
  std::function<void(std::chrono::milliseconds)> sleep;  // defaults to this_thread::sleep_for
};

/// Plain-text page extracts through action=query&prop=extracts. Requests are
/// serialized and spaced by at least `min_interval`.
class MediaWikiClient {
 public:
  MediaWikiClient(std::shared_ptr<HttpTransport> transport, MediaWikiOptions options = {});

  /// Throws FetchError naming the title when the page is missing or every
  /// attempt failed.
  std::string fetch_extract(const std::string& title);

  /// Request target for a title, e.g. /w/api.php?action=query&prop=extracts...
  std::string request_target(const std::string& title) const;
  /// Pulls the extract out of an API response body.
  static std::string parse_extract(const std::string& body, const std::string& title);

 private:
  void pace();

  std::shared_ptr<HttpTransport> transport_;
  MediaWikiOptions options_;
  std::mutex mutex_;
  std::chrono::steady_clock::time_point last_request_{};
  bool has_requested_ = false;
};

}  // namespace topicdyn
