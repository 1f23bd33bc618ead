#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "test_support.hpp"
#include "vcell/error.hpp"
#include "vcell/scan_model.hpp"

using namespace vcell;
using vcell::testing::aps;
using vcell::testing::make_trace;

TEST(ApId, CanonicalizesCaseAndSeparators) {
    EXPECT_EQ(ApId::parse("AA:BB:CC:00:00:01").str(), "aa:bb:cc:00:00:01");
    EXPECT_EQ(ApId::parse("aa-bb-cc-00-00-01").str(), "aa:bb:cc:00:00:01");
    EXPECT_EQ(ApId::parse("AABBCC000001").str(), "aa:bb:cc:00:00:01");
    EXPECT_TRUE(ApId::is_canonical("aa:bb:cc:00:00:01"));
    EXPECT_FALSE(ApId::is_canonical("AA:bb:cc:00:00:01"));
}

TEST(ApId, RejectsMalformed) {
    for (const char* bad : {"", "aa:bb:cc:00:00", "aa:bb:cc:00:00:0g", "aa:bb-cc:00:00:01", "aabbcc00000", "aa:bb:cc:00:00:011"})
        EXPECT_THROW(ApId::parse(bad), DataError) << bad;
}

TEST(ApId, CanonicalizationIsIdempotent) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const unsigned long long v = rng() & 0xFFFFFFFFFFFFULL;
        char buf[18];
        std::snprintf(buf, sizeof buf, "%02llX-%02llx-%02llX-%02llx-%02llX-%02llx", (v >> 40) & 0xFF, (v >> 32) & 0xFF,
                      (v >> 24) & 0xFF, (v >> 16) & 0xFF, (v >> 8) & 0xFF, v & 0xFF);
        const ApId once = ApId::parse(buf);
        EXPECT_TRUE(ApId::is_canonical(once.str()));
        EXPECT_EQ(ApId::parse(once.str()), once);
    }
}

TEST(ParseScanLog, SingleJsonlRecord) {
    const auto trace =
        parse_scan_log(R"({"t":0,"lat":8.59,"lon":-71.14,"aps":["AA:BB:CC:00:00:01"]})", LogFormat::jsonl, {"x", {}});
    ASSERT_EQ(trace.scans.size(), 1u);
    EXPECT_EQ(trace.trace_id, "x");
    ASSERT_EQ(trace.scans[0].aps.size(), 1u);
    EXPECT_EQ(trace.scans[0].aps[0].str(), "aa:bb:cc:00:00:01");
    EXPECT_DOUBLE_EQ(trace.scans[0].pos.lat, 8.59);
}

TEST(ParseScanLog, LatitudeOutOfRangeNamesLine) {
    const std::string log = "{\"t\":0,\"lat\":1,\"lon\":1,\"aps\":[]}\n{\"t\":1,\"lat\":91.0,\"lon\":1,\"aps\":[]}\n";
    try {
        parse_scan_log(log, LogFormat::jsonl);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_NE(std::string(e.what()).find("coordinate"), std::string::npos);
    }
}

TEST(ParseScanLog, ResequencesByTimestamp) {
    const std::string log = "{\"t\":100,\"lat\":0,\"lon\":0,\"aps\":[\"00:00:00:00:00:01\"]}\n"
                            "{\"t\":50,\"lat\":0,\"lon\":0,\"aps\":[\"00:00:00:00:00:02\"]}\n"
                            "{\"t\":200,\"lat\":0,\"lon\":0,\"aps\":[\"00:00:00:00:00:03\"]}\n";
    const auto trace = parse_scan_log(log, LogFormat::jsonl);
    std::vector<std::int64_t> ts;
    for (const auto& s : trace.scans) ts.push_back(s.timestamp_ms);
    // Oracle: sort of the input permutation.
    std::vector<std::int64_t> expected{100, 50, 200};
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(ts, expected);
    for (std::uint32_t i = 0; i < 3; ++i) EXPECT_EQ(trace.scans[i].seq, i);
    EXPECT_EQ(trace.scans[0].aps[0].str(), "00:00:00:00:00:02");
}

TEST(ParseScanLog, DeduplicatesApsWithinScan) {
    const auto trace = parse_scan_log(R"({"t":1,"lat":0,"lon":0,"aps":["00:00:00:00:00:01","00-00-00-00-00-01"]})",
                                      LogFormat::jsonl);
    EXPECT_EQ(trace.scans[0].aps.size(), 1u);
}

TEST(ParseScanLog, DuplicateTimestampsListOffenders) {
    const std::string log = "{\"t\":5,\"lat\":0,\"lon\":0,\"aps\":[]}\n"
                            "{\"t\":7,\"lat\":0,\"lon\":0,\"aps\":[]}\n"
                            "{\"t\":5,\"lat\":0,\"lon\":0,\"aps\":[]}\n";
    try {
        parse_scan_log(log, LogFormat::jsonl);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("t=5"), std::string::npos);
        EXPECT_NE(msg.find("lines 1, 3"), std::string::npos);
    }
}

TEST(ParseScanLog, MalformedLinesReportLineNumber) {
    const std::vector<std::string> bad{"{\"t\":1,\"lat\":0,\"lon\":0,\"aps\":[\n",
                                       "{\"t\":1.5,\"lat\":0,\"lon\":0,\"aps\":[]}\n",
                                       "{\"t\":1,\"lat\":\"x\",\"lon\":0,\"aps\":[]}\n",
                                       "{\"t\":1,\"lat\":0,\"lon\":0,\"aps\":[\"zz\"]}\n",
                                       "{\"t\":1,\"lat\":0,\"lon\":0}\n",
                                       "[1,2]\n",
                                       "{\"t\":1,\"lat\":0,\"lon\":0,\"aps\":[\"\xff\"]}\n"};
    for (const auto& line : bad) {
        try {
            parse_scan_log("\n" + line, LogFormat::jsonl);
            ADD_FAILURE() << "accepted: " << line;
        } catch (const ParseError& e) {
            EXPECT_EQ(e.line(), 2u) << line;
        }
    }
}

TEST(ParseScanLog, IgnoresUnknownFieldsAndBlankLines) {
    const auto trace = parse_scan_log("\n{\"t\":1,\"lat\":0,\"lon\":0,\"aps\":[],\"ssid\":\"x\"}\n\n", LogFormat::jsonl);
    EXPECT_EQ(trace.scans.size(), 1u);
    EXPECT_TRUE(trace.scans[0].empty());
}

TEST(ParseScanLog, EmptyInputIsAnError) { EXPECT_THROW(parse_scan_log("", LogFormat::jsonl), ParseError); }

TEST(ParseScanLog, CsvGroupsRowsByTimestamp) {
    const std::string csv = "t,lat,lon,bssid\r\n"
                            "20,1.0,2.0,AA:AA:AA:AA:AA:02\r\n"
                            "10,1.0,1.0,\"AA:AA:AA:AA:AA:01\"\r\n"
                            "20,1.0,2.0,aa:aa:aa:aa:aa:03\r\n"
                            "30,1.0,3.0,\r\n";
    const auto trace = parse_scan_log(csv, LogFormat::csv);
    ASSERT_EQ(trace.scans.size(), 3u);
    EXPECT_EQ(trace.scans[0].timestamp_ms, 10);
    EXPECT_EQ(trace.scans[1].aps.size(), 2u);
    EXPECT_TRUE(trace.scans[2].empty());
}

TEST(ParseScanLog, CsvQuotingAndErrors) {
    // Quoted field containing an escaped quote is a malformed BSSID, reported on its line.
    try {
        parse_scan_log("t,lat,lon,bssid\n1,0,0,\"a\"\"b\"\n", LogFormat::csv);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(parse_scan_log("time,lat,lon,bssid\n", LogFormat::csv), ParseError);
    EXPECT_THROW(parse_scan_log("t,lat,lon,bssid\n1,0,0\n", LogFormat::csv), ParseError);
    EXPECT_THROW(parse_scan_log("t,lat,lon,bssid\n1,0,0,\"aa:aa:aa:aa:aa:aa\n", LogFormat::csv), ParseError);
    EXPECT_THROW(parse_scan_log("t,lat,lon,bssid\n1,0,0,aa:aa:aa:aa:aa:aa\n1,5,0,aa:aa:aa:aa:aa:ab\n", LogFormat::csv),
                 ParseError);
    EXPECT_THROW(parse_scan_log("t,lat,lon,bssid\n1,0,200,aa:aa:aa:aa:aa:aa\n", LogFormat::csv), ParseError);
}

TEST(ParseScanLog, CsvMultilineQuotedFieldAdvancesLineCount) {
    try {
        parse_scan_log("t,lat,lon,bssid\n1,0,0,\"aa:aa\naa\"\n2,x,0,aa:aa:aa:aa:aa:aa\n", LogFormat::csv);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);  // the quoted BSSID is invalid; reported where its record starts
    }
    try {
        parse_scan_log("t,lat,lon,bssid\n1,0,0,\"aa:aa:aa:aa:aa:aa\"\n2,x,0,aa:aa:aa:aa:aa:aa\n", LogFormat::csv);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(ParseScanLog, JsonlRoundTrip) {
    std::mt19937_64 rng(3);
    for (int round = 0; round < 20; ++round) {
        ScanTrace trace;
        trace.trace_id = "rt";
        const int n = 1 + static_cast<int>(rng() % 30);
        std::int64_t t = static_cast<std::int64_t>(rng() % 100000);
        for (int i = 0; i < n; ++i) {
            Fingerprint f;
            f.seq = static_cast<std::uint32_t>(i);
            t += 1 + static_cast<std::int64_t>(rng() % 5000);
            f.timestamp_ms = t;
            f.pos = GeoPoint{std::uniform_real_distribution<double>(-90, 90)(rng),
                             std::uniform_real_distribution<double>(-180, 180)(rng)};
            const int k = static_cast<int>(rng() % 8);
            for (int j = 0; j < k; ++j) f.aps.push_back(vcell::testing::ap(std::to_string(rng() % 40)));
            normalize(f.aps);
            trace.scans.push_back(std::move(f));
        }
        EXPECT_EQ(parse_scan_log(to_jsonl(trace), LogFormat::jsonl, {"rt", {}}), trace);
    }
}

TEST(ValidateTrace, CountsAndEmptyScans) {
    auto r = validate_trace(make_trace({aps({"a"}), aps({"a", "b"})}));
    EXPECT_EQ(r.scan_count, 2u);
    EXPECT_EQ(r.unique_ap_count, 2u);
    EXPECT_TRUE(r.empty_scans.empty());
    EXPECT_TRUE(r.invariants_hold());

    r = validate_trace(make_trace({aps({"a"}), {}, aps({"b"})}));
    EXPECT_EQ(r.empty_scans, std::vector<std::size_t>{1});
    EXPECT_TRUE(r.invariants_hold());
}

TEST(ValidateTrace, DisjointScansUnion) {
    std::vector<ApSet> scans;
    std::set<std::string> oracle;
    for (int i = 0; i < 10; ++i) {
        ApSet s;
        for (int j = 0; j < 3; ++j) {
            const auto name = std::to_string(i * 3 + j);
            s.push_back(vcell::testing::ap(name));
            oracle.insert(vcell::testing::ap(name).str());
        }
        normalize(s);
        scans.push_back(s);
    }
    EXPECT_EQ(validate_trace(make_trace(scans)).unique_ap_count, oracle.size());
    EXPECT_EQ(oracle.size(), 30u);
}

TEST(ValidateTrace, FlagsBrokenInvariantsWithoutMutating) {
    auto trace = make_trace({aps({"a"}), aps({"b"})});
    trace.scans[1].seq = 5;
    trace.scans[1].timestamp_ms = 0;
    const auto copy = trace;
    const auto r = validate_trace(trace);
    EXPECT_FALSE(r.invariants_hold());
    EXPECT_EQ(r.violations.size(), 2u);
    EXPECT_EQ(trace, copy);
}

TEST(ApUniverse, SmallUnions) {
    EXPECT_EQ(ap_universe(make_trace({aps({"a", "b"}), aps({"b", "c"})})), aps({"a", "b", "c"}));
    EXPECT_EQ(ap_universe(make_trace({aps({"a"})})), aps({"a"}));
}

TEST(ApUniverse, MatchesNaiveUnion) {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 50; ++round) {
        std::vector<ApSet> scans;
        std::set<std::string> oracle;
        const int n = 1 + static_cast<int>(rng() % 20);
        for (int i = 0; i < n; ++i) {
            ApSet s;
            const int k = static_cast<int>(rng() % 6);
            for (int j = 0; j < k; ++j) {
                const auto id = vcell::testing::ap(std::to_string(rng() % 50));
                s.push_back(id);
                oracle.insert(id.str());
            }
            normalize(s);
            scans.push_back(s);
        }
        std::vector<std::string> got;
        for (const auto& id : ap_universe(make_trace(scans))) got.push_back(id.str());
        EXPECT_EQ(got, std::vector<std::string>(oracle.begin(), oracle.end()));
    }
}
