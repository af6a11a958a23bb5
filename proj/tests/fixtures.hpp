#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "bpn/interaction.hpp"
#include "bpn/reduction.hpp"
#include "bpn/transition_system.hpp"
#include "bpn/union.hpp"

namespace fixtures
{

// s0 -a-> s1 <-a-> s2
inline bpn::transition_system a1()
{
    return bpn::ts_builder( "A1" ).initial( "s0" ).arc( "s0", "a", "s1" ).both( "s1", "a", "s2" ).build();
}

// s0 -a-> s1 -a-> s2
inline bpn::transition_system a2()
{
    return bpn::ts_builder( "A2" ).initial( "s0" ).arc( "s0", "a", "s1" ).arc( "s1", "a", "s2" ).build();
}

// s0 <-a-> s1 <-a-> s2
inline bpn::transition_system a3()
{
    return bpn::ts_builder( "A3" ).initial( "s0" ).both( "s0", "a", "s1" ).both( "s1", "a", "s2" ).build();
}

// s0 -a-> s1 -a-> s2 -a-> s3
inline bpn::transition_system a4()
{
    return bpn::ts_builder( "A4" ).initial( "s0" ).arc( "s0", "a", "s1" ).arc( "s1", "a", "s2" ).arc( "s2", "a", "s3" ).build();
}

inline bpn::net_type tau()
{
    return { bpn::interaction::nop, bpn::interaction::set, bpn::interaction::swap, bpn::interaction::free };
}

inline bpn::net_type tau_tilde()
{
    return { bpn::interaction::nop, bpn::interaction::res, bpn::interaction::swap, bpn::interaction::used };
}

// sigma1's type followed by the four sigma2 types.
inline std::vector<bpn::net_type> reduction_types()
{
    std::vector<bpn::net_type> out{ bpn::sigma1_type() };
    for ( auto t : bpn::sigma2_types() )
        out.push_back( t );
    return out;
}

inline bpn::sigma_class class_of( bpn::net_type t )
{
    return t == bpn::sigma1_type() ? bpn::sigma_class::sigma1 : bpn::sigma_class::sigma2;
}

inline bpn::cubic_cnf phi3()
{
    return bpn::parse_cnf( "p cnf13 3\nx0 x1 x2\nx0 x1 x2\nx0 x1 x2\n" );
}

inline bpn::cubic_cnf phi4()
{
    return bpn::parse_cnf( "p cnf13 4\na b c\na b d\na c d\nb c d\n" );
}

inline bpn::net_type random_type( std::mt19937& rng )
{
    return bpn::net_type( static_cast<std::uint8_t>( std::uniform_int_distribution<int>( 1, 255 )( rng ) ) );
}

// A deterministic, reachable TS whose events all occur. States are named
// <prefix>0.., events come from `alphabet`.
inline bpn::transition_system random_ts( std::mt19937& rng, std::size_t max_states, const std::vector<std::string>& alphabet,
                                         const std::string& prefix = "s", std::size_t extra_arcs = 3 )
{
    std::uniform_int_distribution<std::size_t> nstates( 1, max_states );
    std::uniform_int_distribution<std::size_t> pick_event( 0, alphabet.size() - 1 );
    const auto n = nstates( rng );
    std::set<std::pair<std::size_t, std::size_t>> used; // (state, event)
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> arcs;
    auto name = [&]( std::size_t s ) { return prefix + std::to_string( s ); };
    for ( std::size_t s = 1; s < n; ++s )
    {
        while ( true )
        {
            const auto parent = std::uniform_int_distribution<std::size_t>( 0, s - 1 )( rng );
            const auto e = pick_event( rng );
            if ( used.insert( { parent, e } ).second )
            {
                arcs.emplace_back( parent, e, s );
                break;
            }
        }
    }
    const auto extra = std::uniform_int_distribution<std::size_t>( n == 1 ? 1 : 0, extra_arcs )( rng );
    for ( std::size_t k = 0; k < extra; ++k )
    {
        const auto s = std::uniform_int_distribution<std::size_t>( 0, n - 1 )( rng );
        const auto t = std::uniform_int_distribution<std::size_t>( 0, n - 1 )( rng );
        const auto e = pick_event( rng );
        if ( used.insert( { s, e } ).second )
            arcs.emplace_back( s, e, t );
    }
    bpn::ts_builder b( prefix + "ts" );
    b.initial( name( 0 ) );
    for ( std::size_t s = 0; s < n; ++s )
        b.state( name( s ) );
    for ( const auto& [s, e, t] : arcs )
        b.arc( name( s ), alphabet[e], name( t ) );
    return b.build();
}

// A union whose members start with s0 <-u_i-> s1 at the initial state s0 and
// draw their other events from a shared alphabet; regenerated until it
// passes the joining preconditions.
inline bpn::ts_union random_joinable_union( std::mt19937& rng, std::size_t members, std::size_t max_states,
                                          const std::vector<std::string>& alphabet )
{
    while ( true )
    {
        std::vector<bpn::transition_system> ms;
        for ( std::size_t i = 0; i < members; ++i )
        {
            const std::string prefix = "m" + std::to_string( i ) + "s";
            auto body = random_ts( rng, max_states - 1, alphabet, prefix, 2 );
            bpn::ts_builder b( "M" + std::to_string( i ) );
            const auto init = "m" + std::to_string( i ) + "i";
            b.initial( init );
            b.both( init, "u_" + std::to_string( i ), body.state_name( body.initial() ) );
            for ( const auto& s : body.states() )
                b.state( s );
            for ( const auto& a : body.arcs() )
                b.arc( body.state_name( a.src ), body.event_name( a.ev ), body.state_name( a.dst ) );
            ms.push_back( b.build() );
        }
        bpn::ts_union u( std::move( ms ) );
        if ( bpn::check_join_preconditions( u ).ok() )
            return u;
    }
}

} // namespace fixtures
