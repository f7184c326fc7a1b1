#include "topicdyn/mediawiki.hpp"

#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "topicdyn/error.hpp"

namespace topicdyn {

namespace {

#if defined(TOPICDYN_HAVE_HTTPS)
class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse get(const std::string& host, const std::string& target,
                   const std::map<std::string, std::string>& headers) override {
    httplib::SSLClient client(host);
    client.set_follow_location(true);
    client.set_connection_timeout(std::chrono::seconds(10));
    client.set_read_timeout(std::chrono::seconds(30));
    httplib::Headers request_headers(headers.begin(), headers.end());
    auto result = client.Get(target, request_headers);
    if (!result) {
      throw FetchError("request to " + host + " failed: " + httplib::to_string(result.error()));
    }
    return {result->status, result->body};
  }
};
#endif

}  // namespace

std::shared_ptr<HttpTransport> make_https_transport() {
#if defined(TOPICDYN_HAVE_HTTPS)
  return std::make_shared<HttplibTransport>();
#else
  throw FetchError("built without TLS support; MediaWiki fetching is unavailable");
#endif
}

MediaWikiClient::MediaWikiClient(std::shared_ptr<HttpTransport> transport, MediaWikiOptions options)
    : transport_(std::move(transport)), options_(std::move(options)) {
  if (!options_.sleep) {
    options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

std::string MediaWikiClient::request_target(const std::string& title) const {
  const httplib::Params params{{"action", "query"},   {"prop", "extracts"}, {"explaintext", "1"},
                               {"format", "json"},    {"redirects", "1"},   {"titles", title}};
  return httplib::append_query_params(options_.api_path, params);
}

std::string MediaWikiClient::parse_extract(const std::string& body, const std::string& title) {
  const auto doc = nlohmann::json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw FetchError("malformed MediaWiki response for \"" + title + "\"");
  const auto query = doc.find("query");
  if (query == doc.end() || !query->contains("pages")) {
    throw FetchError("MediaWiki response for \"" + title + "\" has no pages");
  }
  for (const auto& [id, page] : (*query)["pages"].items()) {
    if (page.contains("missing") || page.contains("invalid")) {
      throw FetchError("no MediaWiki page for concept seed \"" + title + "\"");
    }
    if (page.contains("extract") && page["extract"].is_string()) {
      return page["extract"].get<std::string>();
    }
  }
  throw FetchError("MediaWiki response for \"" + title + "\" has no extract");
}

void MediaWikiClient::pace() {
  const auto now = std::chrono::steady_clock::now();
  if (has_requested_) {
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(now - last_request_);
    if (elapsed < options_.min_interval) options_.sleep(options_.min_interval - elapsed);
  }
  last_request_ = std::chrono::steady_clock::now();
  has_requested_ = true;
}

std::string MediaWikiClient::fetch_extract(const std::string& title) {
  std::lock_guard<std::mutex> lock(mutex_);
  const std::string target = request_target(title);
  const std::map<std::string, std::string> headers{{"User-Agent", options_.user_agent}};
  std::string last_error;
  auto delay = options_.backoff;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      options_.sleep(delay);
      delay *= 2;
    }
    pace();
    try {
      const HttpResponse response = transport_->get(options_.host, target, headers);
      if (response.status == 200) return parse_extract(response.body, title);
      last_error = "HTTP status " + std::to_string(response.status);
      if (response.status == 404) break;
    } catch (const FetchError& e) {
      // A well-formed "missing" answer will not change on retry.
      if (std::string(e.what()).find("no MediaWiki page") != std::string::npos) throw;
      last_error = e.what();
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  throw FetchError("fetching concept seed \"" + title + "\" failed: " + last_error);
}

}  // namespace topicdyn
