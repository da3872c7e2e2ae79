#include <doctest.h>

#include <sstream>

#include "webeco/csv.hpp"
#include "webeco/date.hpp"
#include "webeco/error.hpp"
#include "webeco/ingest/url.hpp"

using namespace webeco;
using ingest::Url;

TEST_SUITE("core") {

TEST_CASE("dates parse strictly and round-trip") {
    const Date d = Date::parse("2020-02-29");
    CHECK(d.year() == 2020);
    CHECK(d.month() == 2);
    CHECK(d.day() == 29);
    CHECK(d.to_string() == "2020-02-29");
    CHECK(d.plus_days(1).to_string() == "2020-03-01");
    CHECK_THROWS_AS(Date::parse("2019-02-29"), ParseError);
    CHECK_THROWS_AS(Date::parse("2020-1-05"), ParseError);
    CHECK_FALSE(Date::try_parse("yesterday"));
    CHECK(Date::from_serial(0).to_string() == "1970-01-01");
}

TEST_CASE("RFC 3339 timestamps honour offsets") {
    const auto t = Timestamp::parse_rfc3339("2021-01-01T01:30:00+02:00");
    CHECK(t.to_string() == "2020-12-31T23:30:00Z");
    CHECK(t.date().to_string() == "2020-12-31");
    CHECK(Timestamp::parse_rfc3339("2020-05-05").to_string() == "2020-05-05T00:00:00Z");
    CHECK_FALSE(Timestamp::try_parse_rfc3339("2020-05-05 10:00"));
}

TEST_CASE("csv quoting") {
    const auto f = csv::split_record(R"(a,"b,c","d""e",)");
    REQUIRE(f.size() == 4);
    CHECK(f[1] == "b,c");
    CHECK(f[2] == "d\"e");
    CHECK(f[3].empty());
    CHECK(csv::escape("x,y") == "\"x,y\"");
    CHECK(csv::escape("plain") == "plain");
    CHECK(csv::format_double(-0.0) == "0");
    CHECK(csv::format_double(0.1 + 0.2, 10) == "0.3");

    std::istringstream in("\xEF\xBB\xBFh1,h2\n1,2\n\n3,4\n");
    int rows = 0;
    csv::read(in, {"h1", "h2"}, [&](const std::vector<std::string>&, std::size_t) { ++rows; });
    CHECK(rows == 2);
    std::istringstream bad("x,y\n");
    CHECK_THROWS_AS(csv::read(bad, {"h1"}, [](const auto&, std::size_t) {}), ParseError);
}

TEST_CASE("url canonical form") {
    const auto u = Url::parse("HTTPS://Example.COM:443/a/./b/../c?q=1#frag");
    CHECK(u.to_string() == "https://example.com/a/c?q=1");
    CHECK(Url::parse("http://example.com").path == "/");
    CHECK(Url::parse("http://example.com:8080/").to_string() == "http://example.com:8080/");
    CHECK_FALSE(Url::try_parse("ftp://example.com/"));
    CHECK_FALSE(Url::try_parse("not a url"));
    CHECK(Url::parse("http://10.0.0.1/").host_is_ip());
}

TEST_CASE("reference resolution follows RFC 3986 examples") {
    const auto base = Url::parse("http://a/b/c/d;p?q");
    auto r = [&](const char* ref) { return base.resolve(ref)->to_string(); };
    CHECK(r("g") == "http://a/b/c/g");
    CHECK(r("./g") == "http://a/b/c/g");
    CHECK(r("g/") == "http://a/b/c/g/");
    CHECK(r("/g") == "http://a/g");
    CHECK(r("//g") == "http://g/");
    CHECK(r("?y") == "http://a/b/c/d;p?y");
    CHECK(r("g?y") == "http://a/b/c/g?y");
    CHECK(r("..") == "http://a/b/");
    CHECK(r("../g") == "http://a/b/g");
    CHECK(r("../../g") == "http://a/g");
    CHECK(r("../../../g") == "http://a/g");
    CHECK(r("g;x=1/../y") == "http://a/b/c/y");
    CHECK_FALSE(base.resolve("mailto:x@y"));
}

}
