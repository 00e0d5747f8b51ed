#include "nnpsi/neighbor_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "nnpsi/special_functions.hpp"

namespace nnpsi {

namespace {

struct BestMatch {
    double d2 = std::numeric_limits<double>::infinity();
    int idx = -1;
    bool tie = false;

    // Keeps the smallest index among all points attaining the minimum and
    // records whether the minimum is attained more than once. The outcome is
    // independent of visit order.
    void offer(double d2_cand, int j) {
        if (d2_cand < d2) {
            d2 = d2_cand;
            idx = j;
            tie = false;
        } else if (d2_cand == d2) {
            tie = true;
            if (j < idx) idx = j;
        }
    }
};

template <typename Metric>
void brute_query(const Metric& m, int n, int i, BestMatch& best) {
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        best.offer(m.sq_distance(i, j), j);
    }
}

template <typename Metric>
NeighborGraph brute_force_graph(const Metric& m, int n, bool parallel) {
    std::vector<int> nbr(n);
    std::vector<char> tie(n, 0);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            BestMatch best;
            brute_query(m, n, i, best);
            nbr[i] = best.idx;
            tie[i] = best.tie ? 1 : 0;
        }
    } else {
        for (int i = 0; i < n; ++i) {
            BestMatch best;
            brute_query(m, n, i, best);
            nbr[i] = best.idx;
            tie[i] = best.tie ? 1 : 0;
        }
    }
    bool any_tie = std::find(tie.begin(), tie.end(), char(1)) != tie.end();
    return NeighborGraph::from_neighbors(std::move(nbr), any_tie);
}

// Exact kd-tree over the euclidean backend. Candidate distances are computed
// with the same full-sum routine as the brute-force path and subtrees are
// pruned only when their bounding box is strictly farther than the current
// best, so results (including tie detection) are bit-identical to brute force.
class KdTree {
public:
    KdTree(const PointCloud& cloud) : cloud_(cloud), dim_(cloud.dim()) {
        const int n = cloud.size();
        perm_.resize(n);
        std::iota(perm_.begin(), perm_.end(), 0);
        nodes_.reserve(2 * n);
        lo_.assign(dim_, std::numeric_limits<double>::infinity());
        hi_.assign(dim_, -std::numeric_limits<double>::infinity());
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < dim_; ++k) {
                lo_[k] = std::min(lo_[k], cloud.row(i)[k]);
                hi_[k] = std::max(hi_[k], cloud.row(i)[k]);
            }
        }
        root_ = build(0, n);
    }

    void query(int i, BestMatch& best) const {
        std::vector<double> box_lo = lo_;
        std::vector<double> box_hi = hi_;
        search(root_, i, cloud_.row(i), box_lo, box_hi, best);
    }

private:
    static constexpr int kLeafSize = 16;

    struct Node {
        int split_dim = -1;   // -1 marks a leaf
        double split_val = 0.0;
        int left = -1, right = -1;
        int begin = 0, end = 0;  // leaf range into perm_
    };

    int build(int begin, int end) {
        Node node;
        if (end - begin <= kLeafSize) {
            node.begin = begin;
            node.end = end;
            nodes_.push_back(node);
            return static_cast<int>(nodes_.size()) - 1;
        }
        // split the widest dimension at the median
        int sd = 0;
        double width = -1.0;
        for (int k = 0; k < dim_; ++k) {
            double mn = cloud_.row(perm_[begin])[k];
            double mx = mn;
            for (int t = begin + 1; t < end; ++t) {
                const double v = cloud_.row(perm_[t])[k];
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            }
            if (mx - mn > width) {
                width = mx - mn;
                sd = k;
            }
        }
        if (width <= 0.0) {
            // all points in this range coincide
            node.begin = begin;
            node.end = end;
            nodes_.push_back(node);
            return static_cast<int>(nodes_.size()) - 1;
        }
        const int mid = begin + (end - begin) / 2;
        std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                         [&](int a, int b) { return cloud_.row(a)[sd] < cloud_.row(b)[sd]; });
        node.split_dim = sd;
        node.split_val = cloud_.row(perm_[mid])[sd];
        const int self = static_cast<int>(nodes_.size());
        nodes_.push_back(node);
        const int l = build(begin, mid);
        const int r = build(mid, end);
        nodes_[self].left = l;
        nodes_[self].right = r;
        return self;
    }

    double sq_dist_point(const double* q, int j) const {
        const double* p = cloud_.row(j);
        double s = 0.0;
        for (int k = 0; k < dim_; ++k) {
            const double d = q[k] - p[k];
            s += d * d;
        }
        return s;
    }

    // Squared distance from q to the box, summed in dimension order with the
    // same term-by-term accumulation as sq_dist_point. Each coordinate term
    // is dominated by the matching point term for any in-box point, and
    // floating-point rounding preserves termwise order, so the computed box
    // distance never exceeds the computed distance to an in-box point.
    double sq_dist_box(const double* q, const std::vector<double>& box_lo,
                       const std::vector<double>& box_hi) const {
        double s = 0.0;
        for (int k = 0; k < dim_; ++k) {
            double e = 0.0;
            if (q[k] < box_lo[k]) e = box_lo[k] - q[k];
            else if (q[k] > box_hi[k]) e = q[k] - box_hi[k];
            s += e * e;
        }
        return s;
    }

    void search(int node_id, int self, const double* q, std::vector<double>& box_lo,
                std::vector<double>& box_hi, BestMatch& best) const {
        const Node& node = nodes_[node_id];
        if (node.split_dim < 0) {
            for (int t = node.begin; t < node.end; ++t) {
                const int j = perm_[t];
                if (j == self) continue;
                best.offer(sq_dist_point(q, j), j);
            }
            return;
        }
        const int sd = node.split_dim;
        const double qv = q[sd];
        const int near = qv < node.split_val ? node.left : node.right;
        const int far = near == node.left ? node.right : node.left;
        const double save_lo = box_lo[sd];
        const double save_hi = box_hi[sd];

        if (near == node.left) box_hi[sd] = node.split_val; else box_lo[sd] = node.split_val;
        search(near, self, q, box_lo, box_hi, best);
        box_lo[sd] = save_lo;
        box_hi[sd] = save_hi;

        if (far == node.left) box_hi[sd] = node.split_val; else box_lo[sd] = node.split_val;
        // prune only strictly-farther boxes so exact ties are always visited
        if (sq_dist_box(q, box_lo, box_hi) <= best.d2) {
            search(far, self, q, box_lo, box_hi, best);
        }
        box_lo[sd] = save_lo;
        box_hi[sd] = save_hi;
    }

    const PointCloud& cloud_;
    int dim_;
    int root_;
    std::vector<int> perm_;
    std::vector<Node> nodes_;
    std::vector<double> lo_, hi_;
};

NeighborGraph kd_graph(const PointCloud& cloud) {
    const int n = cloud.size();
    KdTree tree(cloud);
    std::vector<int> nbr(n);
    std::vector<char> tie(n, 0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        BestMatch best;
        tree.query(i, best);
        nbr[i] = best.idx;
        tie[i] = best.tie ? 1 : 0;
    }
    bool any_tie = std::find(tie.begin(), tie.end(), char(1)) != tie.end();
    return NeighborGraph::from_neighbors(std::move(nbr), any_tie);
}

} // namespace

NeighborGraph NeighborGraph::from_neighbors(std::vector<int> nbr, bool had_ties) {
    NeighborGraph g;
    g.n = static_cast<int>(nbr.size());
    if (g.n < 2) throw std::invalid_argument("neighbor graph: need at least 2 points");
    g.nbr = std::move(nbr);
    g.had_ties = had_ties;
    g.in_degree.assign(g.n, 0);
    for (int i = 0; i < g.n; ++i) {
        const int j = g.nbr[i];
        if (j < 0 || j >= g.n || j == i) {
            throw std::invalid_argument("neighbor graph: invalid neighbor index");
        }
        ++g.in_degree[j];
    }
    return g;
}

double NeighborGraph::mutual_fraction() const {
    long long mutual = 0;
    for (int i = 0; i < n; ++i) {
        if (nbr[nbr[i]] == i) ++mutual;
    }
    return static_cast<double>(mutual) / n;
}

double NeighborGraph::shared_neighbor_count() const {
    long long s = 0;
    for (int k = 0; k < n; ++k) {
        s += static_cast<long long>(in_degree[k]) * (in_degree[k] - 1);
    }
    return static_cast<double>(s) / n;
}

int NeighborGraph::max_in_degree() const {
    return *std::max_element(in_degree.begin(), in_degree.end());
}

NeighborGraph build_neighbor_graph(const PointCloud& cloud, NeighborStrategy strategy) {
    const int n = cloud.size();
    if (n < 2) throw std::invalid_argument("build_neighbor_graph: need at least 2 points");
    if (strategy == NeighborStrategy::Auto) {
        strategy = (cloud.kd_eligible() && cloud.dim() <= 12 && n >= 64)
                       ? NeighborStrategy::KdTree
                       : NeighborStrategy::BruteParallel;
    }
    switch (strategy) {
        case NeighborStrategy::BruteSerial:
            return brute_force_graph(cloud, n, false);
        case NeighborStrategy::BruteParallel:
            return brute_force_graph(cloud, n, true);
        case NeighborStrategy::KdTree:
            if (!cloud.kd_eligible()) {
                throw std::invalid_argument("kd-tree search requires a euclidean backend");
            }
            return kd_graph(cloud);
        default:
            return brute_force_graph(cloud, n, true);
    }
}

NeighborGraph build_neighbor_graph(const ProductCloud& cloud, NeighborStrategy strategy) {
    const int n = cloud.size();
    if (n < 2) throw std::invalid_argument("build_neighbor_graph: need at least 2 points");
    if (strategy == NeighborStrategy::KdTree) {
        throw std::invalid_argument("kd-tree search is not available for product clouds");
    }
    const bool parallel = strategy != NeighborStrategy::BruteSerial;
    return brute_force_graph(cloud, n, parallel);
}

double gamma_d(int d) {
    if (d < 1) throw std::invalid_argument("gamma_d: dimension must be >= 1");
    // lens_d = V_d * I_{3/4}((d+1)/2, 1/2); gamma_d = V_d / (2 V_d - lens_d)
    const double lens_ratio = reg_inc_beta(0.5 * (d + 1), 0.5, 0.75);
    return 1.0 / (2.0 - lens_ratio);
}

} // namespace nnpsi
