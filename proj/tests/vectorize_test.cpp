#include <gtest/gtest.h>

#include <cmath>

#include "negspec/vectorize.hpp"

using namespace negspec;

namespace {

Corpus corpus_of(std::initializer_list<const char*> texts) {
    std::vector<Document> docs;
    int i = 0;
    for (const char* t : texts) docs.push_back({"doc" + std::to_string(i++), t});
    return Corpus(std::move(docs));
}

}  // namespace

TEST(Tokenize, LowercasesAndSplitsOnPunctuation) {
    EXPECT_EQ(tokenize("Dog dog, cat!"), (std::vector<std::string>{"dog", "dog", "cat"}));
    EXPECT_TRUE(tokenize("").empty());
    EXPECT_EQ(tokenize("a-b c"), (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(tokenize("  #Covid_19 2020  "), (std::vector<std::string>{"covid", "19", "2020"}));
}

TEST(Tokenize, KeepsUtf8Bytes) {
    EXPECT_EQ(tokenize("Zażółć gęślą"), (std::vector<std::string>{"zażółć", "gęślą"}));
}

TEST(Corpus, RejectsDuplicateAndEmptyIds) {
    EXPECT_THROW(Corpus(std::vector<Document>{{"a", "x"}, {"a", "y"}}), Error);
    EXPECT_THROW(Corpus(std::vector<Document>{{"", "x"}}), Error);
}

TEST(Corpus, LabelsMustCoverEveryDocument) {
    EXPECT_THROW(Corpus({{"a", "x"}, {"b", "y"}}, Corpus::LabelMap{{"a", "l"}}), Error);
    Corpus ok({{"a", "x"}, {"b", "y"}}, Corpus::LabelMap{{"a", "l1"}, {"b", "l2"}});
    EXPECT_EQ(*ok.label_vector(), (std::vector<std::string>{"l1", "l2"}));
}

TEST(CountMatrix, CountsTermsInLexicographicColumns) {
    const auto m = count_matrix(corpus_of({"a a b", "b"}));
    EXPECT_EQ(m.columns(), (std::vector<std::string>{"a", "b"}));
    Eigen::MatrixXd expected(2, 2);
    expected << 2, 1, 0, 1;
    EXPECT_EQ(m.values(), expected);
    EXPECT_FALSE(m.normalized());
}

TEST(CountMatrix, SingletonAndDuplicates) {
    EXPECT_EQ(count_matrix(corpus_of({"x"})).values(), Eigen::MatrixXd::Ones(1, 1));
    const auto dup = count_matrix(corpus_of({"a b", "a b"}));
    EXPECT_EQ(dup.values().row(0), dup.values().row(1));
}

TEST(CountMatrix, EmptyVocabularyIsAnError) {
    try {
        count_matrix(corpus_of({"", "!!"}));
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "empty vocabulary");
    }
    EXPECT_THROW(count_matrix(Corpus{}), Error);
}

TEST(TfMatrix, RowsAreProportions) {
    const auto m = tf_matrix(corpus_of({"a a b"}));
    EXPECT_DOUBLE_EQ(m.values()(0, 0), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(m.values()(0, 1), 1.0 / 3.0);

    const auto many = tf_matrix(corpus_of({"the cat sat on the mat", "dogs bark", "", "x y z x y x"}));
    for (Eigen::Index i = 0; i < many.rows(); ++i) {
        const double sum = many.values().row(i).sum();
        if (i == 2) EXPECT_EQ(sum, 0.0);
        else EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(TfidfMatrix, SmoothedIdf) {
    // idf(a) = ln(3/2) + 1 (df 1 of 2), idf(b) = 1 (present everywhere).
    const auto m = tfidf_matrix(corpus_of({"a b", "b"}));
    EXPECT_NEAR(m.values()(0, 0), 0.7027325540540822, 1e-15);
    EXPECT_NEAR(m.values()(0, 1), 0.5, 1e-15);
    EXPECT_NEAR(m.values()(1, 0), 0.0, 0.0);
    EXPECT_NEAR(m.values()(1, 1), 1.0, 1e-15);
    EXPECT_GT(m.values().row(0).norm(), 0.0);
    EXPECT_GT(m.values().row(1).norm(), 0.0);
}

TEST(Vectorizers, Deterministic) {
    const auto c = corpus_of({"alpha beta", "beta gamma gamma", "delta"});
    EXPECT_EQ(tfidf_matrix(c).values(), tfidf_matrix(c).values());
    EXPECT_EQ(count_matrix(c).values(), count_matrix(c).values());
}

TEST(L2Normalize, ScalesRowsToUnitLength) {
    Eigen::MatrixXd v(2, 2);
    v << 3, 4, 1, 0;
    const auto n = l2_normalize(EmbeddingMatrix(v));
    EXPECT_TRUE(n.normalized());
    EXPECT_NEAR(n.values()(0, 0), 0.6, 1e-15);
    EXPECT_NEAR(n.values()(0, 1), 0.8, 1e-15);
    EXPECT_EQ(n.values().row(1), v.row(1));
}

TEST(L2Normalize, ZeroRowNamesIndex) {
    Eigen::MatrixXd v(2, 2);
    v << 1, 1, 0, 0;
    try {
        l2_normalize(EmbeddingMatrix(v));
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos);
    }
}

TEST(EmbeddingMatrix, NormalizedFlagIsChecked) {
    Eigen::MatrixXd v(1, 2);
    v << 1, 1;
    EXPECT_THROW(EmbeddingMatrix(v, {}, true), Error);
    EXPECT_THROW(EmbeddingMatrix(Eigen::MatrixXd::Zero(1, 2), {}, true), Error);
}

TEST(EmbedDocuments, MeanThenNormalize) {
    WordVectors words{{"x", Eigen::Vector2d(1, 0)}, {"y", Eigen::Vector2d(0, 1)}, {"z", Eigen::Vector2d(3, 4)}};
    const auto m = embed_documents(corpus_of({"x y", "z", "z unknown"}), words);
    EXPECT_NEAR(m.values()(0, 0), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(m.values()(0, 1), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(m.values()(1, 0), 0.6, 1e-15);
    EXPECT_NEAR(m.values()(1, 1), 0.8, 1e-15);
    EXPECT_EQ(m.values().row(1), m.values().row(2));
    EXPECT_TRUE(m.normalized());
}

TEST(EmbedDocuments, OutOfVocabularyDocumentIsNamed) {
    WordVectors words{{"x", Eigen::Vector2d(1, 0)}};
    try {
        embed_documents(Corpus({{"first", "x"}, {"second", "nothing known"}}), words);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("second"), std::string::npos);
    }
}

TEST(EmbedDocuments, AntipodalMeanIsRejected) {
    WordVectors words{{"up", Eigen::Vector2d(1, 0)}, {"down", Eigen::Vector2d(-1, 0)}};
    EXPECT_THROW(embed_documents(corpus_of({"up down"}), words), Error);
}

TEST(EmbedDocuments, MixedDimensionsRejected) {
    WordVectors words{{"a", Eigen::Vector2d(1, 0)}, {"b", Eigen::Vector3d(1, 0, 0)}};
    EXPECT_THROW(embed_documents(corpus_of({"a"}), words), Error);
}
