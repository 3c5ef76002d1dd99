#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rank3/specialize.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

using namespace rank3;

namespace {

PAdicWindow finite_window(long p, const Rat& center, long k) {
    PAdicWindow w;
    w.p = p;
    w.center = center;
    w.k = k;
    return w;
}

PAdicWindow interval_window(const Rat& lo, const Rat& hi) {
    PAdicWindow w;
    w.archimedean = true;
    w.delta = 0;
    w.lo = lo;
    w.hi = hi;
    return w;
}

std::vector<Rat> drain(AdmissibleStream& s, long cap = 100000) {
    std::vector<Rat> out;
    while (auto c = s.next()) {
        out.push_back(c->t);
        REQUIRE(static_cast<long>(out.size()) <= cap);
    }
    return out;
}

}  // namespace

TEST_CASE("stream with congruence windows") {
    // ord_2 t >= 3 and ord_5 t >= 3: t = 0 (mod 1000)
    AdmissibleStream s({finite_window(2, Rat(0), 3), finite_window(5, Rat(0), 3)}, Int(5000));
    CHECK(s.modulus() == 1000);
    CHECK(s.base() == 0);
    auto ts = drain(s);
    std::set<Rat> got(ts.begin(), ts.end());
    CHECK(got.size() == ts.size());
    std::set<Rat> want;
    for (long k = -5; k <= 5; ++k) want.insert(Rat(1000 * k));
    CHECK(got == want);
    CHECK(ts.front() == 0);  // spiral starts at the base point

    // t = 1 (mod 8) and t = 0 (mod 125) combine to 625 (mod 1000)
    AdmissibleStream s2({finite_window(2, Rat(1), 3), finite_window(5, Rat(0), 3)}, Int(5000));
    CHECK(s2.modulus() == 1000);
    CHECK(s2.base() == 625);
    for (const Rat& t : drain(s2)) {
        CHECK(den(t) == 1);
        CHECK(((num(t) % 1000) + 1000) % 1000 == 625);
        CHECK(height(t) <= 5000);
    }

    // inconsistent residues at the same prime
    CHECK_THROWS(AdmissibleStream({finite_window(2, Rat(1), 3), finite_window(2, Rat(0), 3)},
                                  Int(100)));
    // center not p-integral
    CHECK_THROWS(AdmissibleStream({finite_window(3, Rat(1, 3), 2)}, Int(100)));
}

TEST_CASE("stream over rationals in an interval") {
    const Int B = 6;
    AdmissibleStream s({interval_window(Rat(-1), Rat(1))}, B);
    CHECK(s.modulus() == 1);
    auto ts = drain(s);
    std::set<Rat> got(ts.begin(), ts.end());
    CHECK(got.size() == ts.size());  // no duplicates
    std::set<Rat> want;
    for (long d = 1; d <= 6; ++d)
        for (long j = -6; j <= 6; ++j) {
            Rat t(j, d);
            t.canonicalize();
            if (height(t) <= B && t >= -1 && t <= 1) want.insert(t);
        }
    CHECK(got == want);
    CHECK(got.size() == 25);
    for (const Rat& t : ts) CHECK(height(t) <= B);

    // f >= 0 everywhere: nothing to enumerate
    PAdicWindow none;
    none.archimedean = true;
    none.delta = 1;
    AdmissibleStream s0({none}, Int(100));
    CHECK_FALSE(s0.next().has_value());
}

TEST_CASE("stream seek and resume") {
    auto windows = std::vector<PAdicWindow>{interval_window(Rat(-2), Rat(2))};
    AdmissibleStream a(windows, Int(12));
    std::vector<Rat> all = drain(a);
    REQUIRE(all.size() > 10);
    AdmissibleStream b(windows, Int(12));
    b.seek(7);
    CHECK(b.cursor() == 7);
    for (size_t i = 7; i < all.size(); ++i) {
        auto c = b.next();
        REQUIRE(c.has_value());
        CHECK(c->t == all[i]);
    }
    CHECK_FALSE(b.next().has_value());
}

TEST_CASE("fixture windows") {
    auto f3 = load_fixture("f3");
    auto ws = fixture_windows(f3);
    REQUIRE(!ws.empty());
    CHECK(ws.back().archimedean);
    CHECK(ws.back().delta == 0);
    bool has2 = false;
    for (const auto& w : ws) {
        if (w.archimedean) continue;
        if (w.p == 2) has2 = true;
        CHECK(w.k >= 0);
        if (w.p > 2) {
            Rat v = RatFun(f3.f).evaluate(w.center);
            REQUIRE(v != 0);
            CHECK(rational_valuation(v, w.p) % 3 == 0);
        }
    }
    CHECK(has2);
}

TEST_CASE("field data from a specialization") {
    auto f3 = load_fixture("f3");

    auto fd = field_from_t(f3, Rat(-49));
    REQUIRE(fd.has_value());
    CHECK(fd->m == Rat(Int("-1587219997521375")));
    CHECK(fd->w == -740255);
    CHECK(fd->D == -740255);  // -740255 = 1 (mod 4), squarefree
    CHECK(fd->level == "field");
    CHECK(fd->s * fd->s * Rat(fd->w) == fd->m);

    // positive value: real quadratic field
    auto fd1 = field_from_t(f3, Rat(1), {Int(1861)});
    REQUIRE(fd1.has_value());
    CHECK(fd1->w == 9305);
    CHECK(fd1->D == 9305);

    // f(0) = 11764900 = 3430^2: no field at all
    CHECK_FALSE(field_from_t(f3, Rat(0)).has_value());

    auto f1 = load_fixture("f1", {Rat(2)});
    auto fdm = field_from_t(f1, Rat(-2));
    REQUIRE(fdm.has_value());
    CHECK(fdm->m == Rat(-8));
    CHECK(fdm->w == -2);
    CHECK(fdm->D == -8);
    CHECK(fdm->s == 2);
}

TEST_CASE("ideal classes against a brute-forced class group") {
    auto f3 = load_fixture("f3");
    auto fd = field_from_t(f3, Rat(-49));
    REQUIRE(fd.has_value());
    auto G = class_group_small(fd->D);
    CHECK(G.h() == 1224);
    CHECK(G.rank3 == 2);

    int produced = 0;
    for (int i = 0; i < static_cast<int>(f3.points.size()); ++i) {
        auto F = ideal_class_from_point(f3, i, *fd);
        if (!F) continue;
        ++produced;
        CHECK(F->disc() == fd->D);
        CHECK(is_primitive(*F));
        CHECK(is_principal(form_pow(*F, Int(3))));
        // a reduced form of the right discriminant is literally in the enumeration
        QuadForm R = reduce_form(*F);
        CHECK(std::find(G.forms.begin(), G.forms.end(), R) != G.forms.end());
    }
    CHECK(produced >= 2);
}

TEST_CASE("field certification") {
    auto f3 = load_fixture("f3");
    auto cert = certify_field(f3, Rat(-49));
    REQUIRE(cert.has_value());
    CHECK(cert->level == "field");
    CHECK(cert->D == -740255);
    CHECK(cert->rank == 2);  // matches the true 3-rank exactly here
    CHECK(cert->forms.size() == 2);
    CHECK(cert->point_indices.size() == 2);
    for (const auto& F : cert->forms) CHECK(F.disc() == cert->D);
    CHECK(reverify_certificate(*cert));

    // skip reasons
    std::string why;
    CHECK_FALSE(certify_field(f3, Rat(0), {}, {}, &why).has_value());
    CHECK(why.find("square") != std::string::npos);
    why.clear();
    CHECK_FALSE(certify_field(f3, Rat(1), {Int(1861)}, {}, &why).has_value());
    CHECK(why.find("real") != std::string::npos);
}

TEST_CASE("certificate serialization and tamper rejection") {
    auto f3 = load_fixture("f3");
    auto cert = certify_field(f3, Rat(-49));
    REQUIRE(cert.has_value());

    auto back = RankCertificate::from_json(cert->to_json());
    CHECK(back.fixture == cert->fixture);
    CHECK(back.t == cert->t);
    CHECK(back.m == cert->m);
    CHECK(back.D == cert->D);
    CHECK(back.level == cert->level);
    CHECK(back.forms == cert->forms);
    CHECK(back.point_indices == cert->point_indices);
    CHECK(back.rank == cert->rank);
    CHECK(reverify_certificate(back));

    RankCertificate bad = back;
    bad.rank += 1;
    CHECK_FALSE(reverify_certificate(bad));

    bad = back;
    bad.D -= 4;  // forms no longer match the discriminant
    CHECK_FALSE(reverify_certificate(bad));

    bad = back;
    bad.m *= 4;  // m * D stays square; fixture evaluation catches it
    CHECK_FALSE(reverify_certificate(bad));

    bad = back;
    bad.forms[0].b += 2;
    CHECK_FALSE(reverify_certificate(bad));

    bad = back;
    bad.forms.pop_back();
    CHECK_FALSE(reverify_certificate(bad));
}

TEST_CASE("enumeration harness store and resume") {
    auto f3 = load_fixture("f3");
    auto dir = std::filesystem::temp_directory_path();
    std::string store = (dir / "rank3_test_store.jsonl").string();
    std::filesystem::remove(store);
    std::filesystem::remove(store + ".cursor");

    auto sum = enumeration_harness(f3, Int(20), store);
    // real window caps at -14921/1024: integers -15 .. -20 and nothing else
    CHECK(sum.candidates == 6);
    CHECK(sum.certified >= 1);
    CHECK(sum.certified + sum.skipped == sum.candidates);
    CHECK(static_cast<long>(sum.fresh.size()) == sum.certified);

    // every stored line parses and re-verifies; discriminants are distinct
    std::set<Int> ds;
    std::ifstream in(store);
    std::string line;
    long lines = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++lines;
        auto c = RankCertificate::from_json(line);
        CHECK(c.fixture == "f3");
        CHECK(c.level == "field");
        CHECK(reverify_certificate(c));
        CHECK(ds.insert(c.D).second);
    }
    CHECK(lines == sum.certified);

    // rank histogram counts fields of rank at least r: monotone in r
    long prev = -1;
    for (auto it = sum.fields_per_rank.rbegin(); it != sum.fields_per_rank.rend(); ++it) {
        if (prev >= 0) CHECK(it->second >= prev);
        prev = it->second;
    }

    // second run resumes at the saved cursor and touches nothing
    auto again = enumeration_harness(f3, Int(20), store);
    CHECK(again.candidates == 0);
    CHECK(again.certified == 0);
    // previously stored fields still count toward the histogram
    CHECK(again.fields_per_rank == sum.fields_per_rank);

    // a larger height bound starts fresh (its own cursor) and dedups by D
    auto wider = enumeration_harness(f3, Int(22), store);
    CHECK(wider.candidates == 8);
    for (const auto& c : wider.fresh) CHECK(!ds.count(c.D));

    std::filesystem::remove(store);
    std::filesystem::remove(store + ".cursor");
}
