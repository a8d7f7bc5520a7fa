#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "lpma/linear_code.hpp"
#include "lpma/rng.hpp"

using namespace lpma;

TEST_CASE("encoding examples") {
    LinearCode identity = make_identity_code(7, 2);
    CHECK(fec_encode(identity, {1, 3}) == Codeword{1, 3});

    LinearCode rep2 = make_repetition_code(2, 3);
    CHECK(fec_encode(rep2, {1}) == Codeword{1, 1, 1});

    LinearCode rep7 = make_repetition_code(7, 2);
    CHECK(fec_encode(rep7, {3}) == Codeword{3, 3});

    CHECK_THROWS_AS(fec_encode(identity, {1}), std::invalid_argument);
    CHECK_THROWS_AS(fec_encode(identity, {1, 9}), std::invalid_argument);
}

TEST_CASE("decoding examples") {
    LinearCode identity = make_identity_code(7, 2);
    auto [w1, v1] = fec_decode(identity, {5, 2});
    CHECK(w1 == Message{5, 2});
    CHECK(v1 == Codeword{5, 2});

    LinearCode rep2 = make_repetition_code(2, 3);
    CHECK(fec_decode(rep2, {1, 0, 1}).first == Message{1});

    // both (3,3) and (4,4) are at distance 1; the smaller message wins
    LinearCode rep7 = make_repetition_code(7, 2);
    CHECK(fec_decode(rep7, {3, 4}).first == Message{3});
}

TEST_CASE("reencode equals encode") {
    LinearCode rep5 = make_repetition_code(5, 4);
    std::mt19937_64 rng = substream_rng(3, 0);
    for (int i = 0; i < 1000; ++i) {
        Message w{static_cast<FieldSymbol>(uniform_below(rng, 5))};
        CHECK(reencode(rep5, w) == fec_encode(rep5, w));
    }
    CHECK(reencode(make_repetition_code(2, 3), {0}) == Codeword{0, 0, 0});
}

TEST_CASE("round trip is the identity for every message") {
    std::vector<LinearCode> codes{make_identity_code(7, 2), make_repetition_code(5, 4),
                                  make_single_parity_check_code(3, 4)};
    for (const LinearCode& code : codes) {
        Message w(code.k, 0);
        while (true) {
            auto [w_hat, v_hat] = fec_decode(code, fec_encode(code, w));
            REQUIRE(w_hat == w);
            REQUIRE(v_hat == fec_encode(code, w));
            std::size_t pos = code.k;
            while (pos > 0) {
                --pos;
                if (++w[pos] < code.q) break;
                w[pos] = 0;
            }
            if (pos == 0 && w[0] == 0) break;
        }
    }
}

TEST_CASE("encoding is linear") {
    LinearCode parity = make_single_parity_check_code(5, 6);
    std::mt19937_64 rng = substream_rng(5, 0);
    auto random_message = [&rng, &parity] {
        Message w(parity.k);
        for (auto& s : w) s = static_cast<FieldSymbol>(uniform_below(rng, 5));
        return w;
    };
    for (int i = 0; i < 200; ++i) {
        Message w1 = random_message(), w2 = random_message(), sum(parity.k);
        for (std::size_t j = 0; j < parity.k; ++j) sum[j] = (w1[j] + w2[j]) % parity.q;
        Codeword v1 = fec_encode(parity, w1), v2 = fec_encode(parity, w2);
        Codeword expected(parity.n);
        for (std::size_t j = 0; j < parity.n; ++j) expected[j] = (v1[j] + v2[j]) % parity.q;
        CHECK(fec_encode(parity, sum) == expected);
    }
}

TEST_CASE("repetition codes correct below half the minimum distance") {
    for (std::int64_t q : {2, 7}) {
        LinearCode rep = make_repetition_code(q, 3);  // d_min = 3, corrects 1 error
        for (FieldSymbol w = 0; w < q; ++w) {
            Codeword clean = fec_encode(rep, {w});
            for (std::size_t pos = 0; pos < rep.n; ++pos) {
                for (FieldSymbol e = 1; e < q; ++e) {
                    Codeword corrupted = clean;
                    corrupted[pos] = (corrupted[pos] + e) % q;
                    REQUIRE(fec_decode(rep, corrupted).first == Message{w});
                }
            }
        }
    }
}

TEST_CASE("parity-check codewords sum to zero") {
    LinearCode parity = make_single_parity_check_code(7, 4);
    std::mt19937_64 rng = substream_rng(9, 0);
    for (int i = 0; i < 100; ++i) {
        Message w(parity.k);
        for (auto& s : w) s = static_cast<FieldSymbol>(uniform_below(rng, 7));
        Codeword v = fec_encode(parity, w);
        FieldSymbol sum = 0;
        for (FieldSymbol s : v) sum = (sum + s) % parity.q;
        CHECK(sum == 0);
    }
}

TEST_CASE("construction validation") {
    CHECK_THROWS_AS(make_linear_code(6, 1, 2, {1, 1}), std::invalid_argument);  // q not prime
    CHECK_THROWS_AS(make_linear_code(3, 2, 2, {1, 1, 2, 2}), std::invalid_argument);  // rank 1
    CHECK_THROWS_AS(make_linear_code(3, 3, 2, {1, 0, 0, 1, 1, 1}), std::invalid_argument);  // k > n
    CHECK(make_linear_code(3, 1, 2, {1, -1}).generator == std::vector<FieldSymbol>{1, 2});
    CHECK(make_identity_code(7, 4).identity);
    CHECK_FALSE(make_repetition_code(7, 4).identity);
}
