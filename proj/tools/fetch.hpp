#pragma once

#include <optional>
#include <string>

#include "webeco/date.hpp"
#include "webeco/ingest/crawl.hpp"

namespace webeco::cli {

/// Live HTTP(S) GET, no redirects followed. Pages are stamped with `stamp` when
/// given, otherwise with the wall clock.
ingest::Fetcher http_fetcher(int timeout_seconds, std::optional<Timestamp> stamp);

/// Serves DIR/<host>/<path> from disk; a path ending in '/' maps to index.html.
ingest::Fetcher mirror_fetcher(const std::string& dir, std::optional<Timestamp> stamp);

}  // namespace webeco::cli
