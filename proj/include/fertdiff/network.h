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
#ifndef FERTDIFF_NETWORK_H
#define FERTDIFF_NETWORK_H

#include "fertdiff/population.h"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fertdiff
{

/// Per-farm adoption flags (0 or 1), indexed like the Population.
using AdoptionFlags = std::vector<std::uint8_t>;

/**
 * Undirected simple small-world graph over farm indices.
 * Neighbor lists are sorted; the graph never changes after construction.
 */
class SocialNetwork
{
public:
    SocialNetwork() = default;
    SocialNetwork(std::vector<std::vector<std::size_t>> adjacency, std::size_t k, double p, std::uint64_t seed,
                  std::size_t rewired_edges);

    std::size_t size() const
    {
        return m_adjacency.size();
    }
    std::size_t k() const
    {
        return m_k;
    }
    double p() const
    {
        return m_p;
    }
    /// Seed that produced this graph (may exceed the requested seed after connectivity retries).
    std::uint64_t seed() const
    {
        return m_seed;
    }
    std::size_t rewired_edges() const
    {
        return m_rewired;
    }
    const std::vector<std::size_t>& neighbors(std::size_t i) const
    {
        return m_adjacency.at(i);
    }
    std::size_t degree(std::size_t i) const
    {
        return m_adjacency.at(i).size();
    }
    std::size_t edge_count() const;

    /// Edges as (i, j) with i < j, lexicographically sorted.
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;

    bool is_connected() const;

private:
    std::vector<std::vector<std::size_t>> m_adjacency;
    std::size_t m_k = 0;
    double m_p = 0.0;
    std::uint64_t m_seed = 0;
    std::size_t m_rewired = 0;
};

/// Connectivity retries before watts_strogatz gives up.
inline constexpr int kMaxConnectivityRetries = 100;

/**
 * Watts-Strogatz graph: ring lattice with k/2 neighbors per side, then each
 * lattice edge (i, i+d) has its far endpoint rewired with probability p to a
 * uniformly drawn node, redrawing on self-loops and duplicates. Disconnected
 * results are regenerated with seed+1, up to kMaxConnectivityRetries times.
 */
SocialNetwork watts_strogatz(std::size_t n, std::size_t k, double p, std::uint64_t seed);

/// Fraction of i's neighbors that have adopted; 0 for an isolated node.
double peer_signal(std::size_t i, std::span<const std::uint8_t> adopted, const SocialNetwork& net);

struct SnapshotRow {
    std::size_t node = 0;
    bool adopted = false;
    std::size_t degree = 0;
    double size_norm = 0.0;
};

struct NetworkSnapshot {
    int year = 0;
    std::vector<SnapshotRow> rows;

    std::size_t adopter_count() const;
};

/// Node-state table for one year. pop may be empty, in which case size_norm is 0.
NetworkSnapshot snapshot(std::span<const std::uint8_t> adopted, int year, const SocialNetwork& net,
                         const Population& pop);

std::string snapshot_to_csv(const NetworkSnapshot& snap);

/// Two-column edge list, i < j per row.
std::string edge_list_csv(const SocialNetwork& net);

} // namespace fertdiff

#endif // FERTDIFF_NETWORK_H
