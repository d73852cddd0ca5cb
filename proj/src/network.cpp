/*
* Copyright (C) 2026 fertdiff contributors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#include "fertdiff/network.h"
#include "fertdiff/io.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fertdiff
{

SocialNetwork::SocialNetwork(std::vector<std::vector<std::size_t>> adjacency, std::size_t k, double p,
                             std::uint64_t seed, std::size_t rewired_edges)
    : m_adjacency(std::move(adjacency))
    , m_k(k)
    , m_p(p)
    , m_seed(seed)
    , m_rewired(rewired_edges)
{
    for (auto& nbrs : m_adjacency) {
        std::sort(nbrs.begin(), nbrs.end());
    }
}

std::size_t SocialNetwork::edge_count() const
{
    std::size_t degree_sum = 0;
    for (const auto& nbrs : m_adjacency) {
        degree_sum += nbrs.size();
    }
    return degree_sum / 2;
}

std::vector<std::pair<std::size_t, std::size_t>> SocialNetwork::edges() const
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(edge_count());
    for (std::size_t i = 0; i < m_adjacency.size(); ++i) {
        for (auto j : m_adjacency[i]) {
            if (i < j) {
                out.emplace_back(i, j);
            }
        }
    }
    return out;
}

bool SocialNetwork::is_connected() const
{
    if (m_adjacency.empty()) {
        return true;
    }
    std::vector<char> seen(m_adjacency.size(), 0);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const auto u = frontier.front();
        frontier.pop();
        for (auto v : m_adjacency[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                frontier.push(v);
            }
        }
    }
    return reached == m_adjacency.size();
}

namespace
{

SocialNetwork build_once(std::size_t n, std::size_t k, double p, std::uint64_t seed)
{
    std::vector<std::set<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 1; d <= k / 2; ++d) {
            const auto j = (i + d) % n;
            adj[i].insert(j);
            adj[j].insert(i);
        }
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::size_t rewired = 0;
    // Visit lattice edges by offset, then by source node.
    for (std::size_t d = 1; d <= k / 2; ++d) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto j = (i + d) % n;
            if (unit(rng) >= p) {
                continue;
            }
            if (!adj[i].count(j) || adj[i].size() >= n - 1) {
                // edge already moved away, or i is saturated
                continue;
            }
            std::size_t w = pick(rng);
            while (w == i || adj[i].count(w)) {
                w = pick(rng);
            }
            adj[i].erase(j);
            adj[j].erase(i);
            adj[i].insert(w);
            adj[w].insert(i);
            ++rewired;
        }
    }

    std::vector<std::vector<std::size_t>> lists(n);
    for (std::size_t i = 0; i < n; ++i) {
        lists[i].assign(adj[i].begin(), adj[i].end());
    }
    return SocialNetwork(std::move(lists), k, p, seed, rewired);
}

} // namespace

SocialNetwork watts_strogatz(std::size_t n, std::size_t k, double p, std::uint64_t seed)
{
    if (k < 2 || k % 2 != 0) {
        throw std::invalid_argument("watts_strogatz: k must be even and >= 2 (got " + std::to_string(k) + ")");
    }
    if (n <= k) {
        throw std::invalid_argument("watts_strogatz: need n > k (n=" + std::to_string(n) +
                                    ", k=" + std::to_string(k) + ")");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("watts_strogatz: p must lie in [0, 1]");
    }
    for (int attempt = 0; attempt <= kMaxConnectivityRetries; ++attempt) {
        auto net = build_once(n, k, p, seed + static_cast<std::uint64_t>(attempt));
        if (net.is_connected()) {
            return net;
        }
    }
    throw std::runtime_error("watts_strogatz: no connected graph within " + std::to_string(kMaxConnectivityRetries) +
                             " retries");
}

double peer_signal(std::size_t i, std::span<const std::uint8_t> adopted, const SocialNetwork& net)
{
    if (i >= net.size()) {
        throw std::out_of_range("peer_signal: node " + std::to_string(i) + " out of range");
    }
    if (adopted.size() != net.size()) {
        throw std::invalid_argument("peer_signal: adoption vector size does not match network");
    }
    const auto& nbrs = net.neighbors(i);
    if (nbrs.empty()) {
        return 0.0;
    }
    std::size_t count = 0;
    for (auto j : nbrs) {
        count += adopted[j] ? 1 : 0;
    }
    return static_cast<double>(count) / static_cast<double>(nbrs.size());
}

std::size_t NetworkSnapshot::adopter_count() const
{
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SnapshotRow& r) {
        return r.adopted;
    }));
}

NetworkSnapshot snapshot(std::span<const std::uint8_t> adopted, int year, const SocialNetwork& net,
                         const Population& pop)
{
    if (adopted.size() != net.size()) {
        throw std::invalid_argument("snapshot: adoption vector size does not match network");
    }
    NetworkSnapshot snap;
    snap.year = year;
    snap.rows.reserve(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
        const double size = pop.size() == net.size() ? pop.size_norm()[i] : 0.0;
        snap.rows.push_back({i, adopted[i] != 0, net.degree(i), size});
    }
    return snap;
}

std::string snapshot_to_csv(const NetworkSnapshot& snap)
{
    std::ostringstream out;
    out << "year,node,adopted,degree,size_norm\n";
    for (const auto& r : snap.rows) {
        out << snap.year << ',' << r.node << ',' << (r.adopted ? 1 : 0) << ',' << r.degree << ','
            << format_double(r.size_norm) << '\n';
    }
    return out.str();
}

std::string edge_list_csv(const SocialNetwork& net)
{
    std::ostringstream out;
    out << "source,target\n";
    for (auto [i, j] : net.edges()) {
        out << i << ',' << j << '\n';
    }
    return out.str();
}

} // namespace fertdiff
