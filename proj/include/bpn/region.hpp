#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bpn/interaction.hpp"
#include "bpn/transition_system.hpp"

namespace bpn
{

// A region of a transition system: a bit per state and an interaction per
// event, indexed like the states and events of the system it belongs to.
struct region
{
    std::vector<bool> support;
    std::vector<interaction> signature;

    friend bool operator==( const region&, const region& ) = default;
};

inline void require_domain( const transition_system& ts, const region& r )
{
    if ( r.support.size() != ts.num_states() )
        throw domain_mismatch( "region support covers " + std::to_string( r.support.size() ) + " states, system has " +
                               std::to_string( ts.num_states() ) );
    if ( r.signature.size() != ts.num_events() )
        throw domain_mismatch( "region signature covers " + std::to_string( r.signature.size() ) + " events, system has " +
                               std::to_string( ts.num_events() ) );
}

// Builds a region from name-keyed maps. Every state and event of the system
// must be covered and no unknown name may appear.
inline region region_from_names( const transition_system& ts, const std::map<std::string, bool>& support,
                                 const std::map<std::string, interaction>& signature )
{
    region r;
    r.support.assign( ts.num_states(), false );
    r.signature.assign( ts.num_events(), interaction::nop );
    std::vector<bool> have_s( ts.num_states(), false ), have_e( ts.num_events(), false );
    for ( const auto& [name, bit] : support )
    {
        auto s = ts.state( name );
        r.support[s] = bit;
        have_s[s] = true;
    }
    for ( const auto& [name, i] : signature )
    {
        auto e = ts.event( name );
        r.signature[e] = i;
        have_e[e] = true;
    }
    for ( state_id s = 0; s < ts.num_states(); ++s )
        if ( !have_s[s] )
            throw domain_mismatch( "region support misses state '" + ts.state_name( s ) + "'" );
    for ( event_id e = 0; e < ts.num_events(); ++e )
        if ( !have_e[e] )
            throw domain_mismatch( "region signature misses event '" + ts.event_name( e ) + "'" );
    return r;
}

inline region region_from_support_set( const transition_system& ts, const std::vector<std::string>& ones,
                                       const std::map<std::string, interaction>& signature )
{
    std::map<std::string, bool> support;
    for ( const auto& s : ts.states() )
        support[s] = false;
    for ( const auto& s : ones )
    {
        (void)ts.state( s );
        support[s] = true;
    }
    return region_from_names( ts, support, signature );
}

inline bool validate_region( const transition_system& ts, net_type type, const region& r )
{
    require_domain( ts, r );
    for ( auto i : r.signature )
        if ( !type.contains( i ) )
            return false;
    for ( const auto& a : ts.arcs() )
    {
        auto image = apply_interaction( r.signature[a.ev], r.support[a.src] );
        if ( !image || *image != r.support[a.dst] )
            return false;
    }
    return true;
}

inline bool separates( const region& r, state_id s, state_id t )
{
    if ( s >= r.support.size() || t >= r.support.size() )
        throw domain_mismatch( "state outside the region's support" );
    return r.support[s] != r.support[t];
}

inline bool inhibits( const region& r, event_id e, state_id s )
{
    if ( s >= r.support.size() )
        throw domain_mismatch( "state outside the region's support" );
    if ( e >= r.signature.size() )
        throw domain_mismatch( "event outside the region's signature" );
    return !defined_at( r.signature[e], r.support[s] );
}

// Separation problems are decomposed into independent atoms.
struct state_pair
{
    state_id first;
    state_id second;

    friend auto operator<=>( const state_pair&, const state_pair& ) = default;
};

struct event_state
{
    event_id event;
    state_id state;

    friend auto operator<=>( const event_state&, const event_state& ) = default;
};

using separation_atom = std::variant<state_pair, event_state>;

inline void require_well_formed( const transition_system& ts, const separation_atom& atom )
{
    if ( const auto* p = std::get_if<state_pair>( &atom ) )
    {
        if ( p->first >= ts.num_states() || p->second >= ts.num_states() )
            throw domain_mismatch( "state pair refers to an unknown state" );
        if ( p->first == p->second )
            throw invalid_input( "a state pair must consist of two distinct states" );
        return;
    }
    const auto& es = std::get<event_state>( atom );
    if ( es.event >= ts.num_events() || es.state >= ts.num_states() )
        throw domain_mismatch( "event/state atom refers to an unknown state or event" );
    if ( ts.occurs( es.event, es.state ) )
        throw invalid_input( "event '" + ts.event_name( es.event ) + "' occurs at '" + ts.state_name( es.state ) +
                             "'; nothing to inhibit" );
}

inline bool solves( const region& r, const separation_atom& atom )
{
    if ( const auto* p = std::get_if<state_pair>( &atom ) )
        return separates( r, p->first, p->second );
    const auto& es = std::get<event_state>( atom );
    return inhibits( r, es.event, es.state );
}

// "sp <s> <s'>" or "essp <e> <s>", the counterexample/witness notation.
inline std::string describe( const transition_system& ts, const separation_atom& atom )
{
    if ( const auto* p = std::get_if<state_pair>( &atom ) )
        return "sp " + ts.state_name( p->first ) + " " + ts.state_name( p->second );
    const auto& es = std::get<event_state>( atom );
    return "essp " + ts.event_name( es.event ) + " " + ts.state_name( es.state );
}

enum class sigma_class
{
    sigma1, // {nop,set,swap,free}
    sigma2, // {nop,set,swap,used} plus any of res, free
};

// Signature determined by a support alone, for the two reduction families.
// Per event, first matching case wins:
//   free (sigma1) / used (sigma2) when every endpoint is 0 / 1, or no arcs;
//   set  when some s -e-> s' <-e-> s'' has sup(s)=0, sup(s')=sup(s'')=1;
//   swap when some arc changes the support;
//   nop  otherwise.
// The result is not necessarily a valid region; callers check.
inline region derive_signature( const transition_system& ts, const std::vector<bool>& support, sigma_class sigma )
{
    if ( support.size() != ts.num_states() )
        throw domain_mismatch( "support size does not match the number of states" );
    region r{ support, std::vector<interaction>( ts.num_events(), interaction::nop ) };
    std::vector<std::vector<const arc*>> by_event( ts.num_events() );
    for ( const auto& a : ts.arcs() )
        by_event[a.ev].push_back( &a );

    const bool constant_bit = sigma == sigma_class::sigma2;
    for ( event_id e = 0; e < ts.num_events(); ++e )
    {
        const auto& arcs = by_event[e];
        const bool constant = std::all_of( arcs.begin(), arcs.end(), [&]( const arc* a ) {
            return support[a->src] == constant_bit && support[a->dst] == constant_bit;
        } );
        if ( constant )
        {
            r.signature[e] = sigma == sigma_class::sigma1 ? interaction::free : interaction::used;
            continue;
        }
        bool star = false;
        bool flips = false;
        for ( const arc* a : arcs )
        {
            if ( support[a->src] != support[a->dst] )
                flips = true;
            if ( support[a->src] || !support[a->dst] )
                continue;
            // a: s -e-> s' with sup(s)=0, sup(s')=1; look for s' <-e-> s''
            for ( const auto& b : ts.out_arcs( a->dst ) )
                if ( b.ev == e && support[b.dst] && ts.has_arc( b.dst, e, a->dst ) )
                    star = true;
        }
        if ( star )
            r.signature[e] = interaction::set;
        else if ( flips )
            r.signature[e] = interaction::swap;
        else
            r.signature[e] = interaction::nop;
    }
    return r;
}

inline region derive_signature( const transition_system& ts, const std::vector<std::string>& ones, sigma_class sigma )
{
    std::vector<bool> support( ts.num_states(), false );
    for ( const auto& s : ones )
        support[ts.state( s )] = true;
    return derive_signature( ts, support, sigma );
}

// Post-hoc audit of the basic facts every region satisfies:
//  (a) s <-e-> s' with s != s': sup(s) != sup(s') iff sig(e) = swap;
//  (b) s -e-> s' <-e-> s'' pairwise distinct and sig(e) = swap: sup(s) = sup(s'');
//  (c) every arc's image is a transition of the type (paths map to paths).
inline std::vector<std::string> observation_violations( const transition_system& ts, net_type type, const region& r )
{
    require_domain( ts, r );
    std::vector<std::string> out;
    for ( const auto& a : ts.arcs() )
    {
        const auto sig = r.signature[a.ev];
        auto image = apply_interaction( sig, r.support[a.src] );
        if ( !type.contains( sig ) || !image || *image != r.support[a.dst] )
            out.push_back( "(c) arc " + ts.state_name( a.src ) + " -" + ts.event_name( a.ev ) + "-> " +
                           ts.state_name( a.dst ) + " has no image under " + std::string( name_of( sig ) ) );
        if ( a.src == a.dst )
            continue;
        const bool back = ts.has_arc( a.dst, a.ev, a.src );
        if ( back && ( r.support[a.src] != r.support[a.dst] ) != ( sig == interaction::swap ) )
            out.push_back( "(a) " + ts.state_name( a.src ) + " <-" + ts.event_name( a.ev ) + "-> " + ts.state_name( a.dst ) );
        if ( sig == interaction::swap )
        {
            // a is s -e-> s'; look for s' <-e-> s''
            for ( const auto& b : ts.out_arcs( a.dst ) )
                if ( b.ev == a.ev && b.dst != a.src && b.dst != a.dst && ts.has_arc( b.dst, a.ev, a.dst ) &&
                     r.support[a.src] != r.support[b.dst] )
                    out.push_back( "(b) " + ts.state_name( a.src ) + " -" + ts.event_name( a.ev ) + "-> " +
                                   ts.state_name( a.dst ) + " <-> " + ts.state_name( b.dst ) );
        }
    }
    return out;
}

} // namespace bpn
