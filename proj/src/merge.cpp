#include "chac/merge.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace chac {

namespace {

using Bucket = std::vector<ModeId>;
// (alpha, label) -> modes sharing an incoming / outgoing edge with that label
using LabelBuckets = std::map<std::pair<std::string, std::string>, Bucket>;

struct Buckets {
    LabelBuckets in;
    LabelBuckets out;
    std::map<std::string, Bucket> terminal;  // alpha -> outdeg-0 modes
};

void dedup(Bucket& bucket) {
    std::sort(bucket.begin(), bucket.end());
    bucket.erase(std::unique(bucket.begin(), bucket.end()), bucket.end());
}

Buckets collect_buckets(const HybridAutomaton& a) {
    Buckets b;
    std::set<ModeId> has_out;
    for (const Edge& e : a.edges) {
        has_out.insert(e.src);
        b.out[{a.alpha_of(e.src), e.label}].push_back(e.src);
        b.in[{a.alpha_of(e.dst), e.label}].push_back(e.dst);
    }
    for (auto& [key, bucket] : b.out)
        dedup(bucket);
    for (auto& [key, bucket] : b.in)
        dedup(bucket);
    for (ModeId m : a.modes)
        if (!has_out.count(m))
            b.terminal[a.alpha_of(m)].push_back(m);
    return b;
}

} // namespace

SimilarityRelation action_similarity(const HybridAutomaton& a) {
    Buckets b = collect_buckets(a);
    SimilarityRelation rel;
    for (const LabelBuckets* lb : {&b.in, &b.out})
        for (const auto& [key, bucket] : *lb)
            for (std::size_t i = 0; i < bucket.size(); ++i)
                for (std::size_t j = i + 1; j < bucket.size(); ++j)
                    rel.insert(bucket[i], bucket[j]);
    return rel;
}

SimilarityRelation terminal_similarity(const HybridAutomaton& a) {
    Buckets b = collect_buckets(a);
    SimilarityRelation rel;
    for (const auto& [alpha, bucket] : b.terminal)
        for (std::size_t i = 0; i < bucket.size(); ++i)
            for (std::size_t j = i + 1; j < bucket.size(); ++j)
                rel.insert(bucket[i], bucket[j]);
    return rel;
}

namespace {

// Chaining each bucket into the union-find yields the same closure as
// uniting every pair, in time linear in the bucket sizes.
Partition bucket_partition(const HybridAutomaton& a, std::ostream* explain) {
    ModeId max_id = 0;
    for (ModeId m : a.modes)
        max_id = std::max(max_id, m);
    Partition p(a.modes.empty() ? 0 : max_id + 1);

    Buckets b = collect_buckets(a);
    auto chain = [&](const Bucket& bucket, const std::string& why) {
        for (std::size_t i = 1; i < bucket.size(); ++i)
            if (p.unite(bucket[0], bucket[i]) && explain)
                *explain << bucket[0] << ' ' << bucket[i] << ' ' << why << '\n';
    };
    for (const auto& [key, bucket] : b.in)
        chain(bucket, "shared-in-label " + key.second);
    for (const auto& [key, bucket] : b.out)
        chain(bucket, "shared-out-label " + key.second);
    for (const auto& [alpha, bucket] : b.terminal)
        chain(bucket, "terminal " + (alpha.empty() ? std::string("-") : alpha));
    return p;
}

bool is_identity_on(const Partition& p, const HybridAutomaton& a) {
    for (ModeId m : a.modes)
        if (p.find(m) != m)
            return false;
    return true;
}

} // namespace

Partition merge_partition(const HybridAutomaton& a) {
    return bucket_partition(a, nullptr);
}

HybridAutomaton merge_modes(const HybridAutomaton& a, const MergeOptions& opts) {
    HybridAutomaton current = a;
    for (;;) {
        Partition p = bucket_partition(current, opts.explain);
        bool stable = is_identity_on(p, current);
        if (!stable)
            current = quotient(current, p);
        if (!opts.fixpoint || stable)
            break;
    }
    return canonicalize(current);
}

} // namespace chac
