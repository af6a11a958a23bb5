#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bpn/net.hpp"
#include "bpn/reduction.hpp"
#include "bpn/ts_io.hpp"
#include "bpn/witness_io.hpp"
#include "fixtures.hpp"

namespace fs = std::filesystem;

namespace
{

struct outcome
{
    int code;
    std::string out, err;
};

class Cli : public ::testing::Test
{
protected:
    fs::path dir;

    void SetUp() override
    {
        dir = fs::temp_directory_path() / ( "bpn_cli_" + std::to_string( ::getpid() ) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name() );
        fs::create_directories( dir );
        put( "a1.ts", bpn::write_ts( fixtures::a1() ) );
        put( "a2.ts", bpn::write_ts( fixtures::a2() ) );
        put( "a3.ts", bpn::write_ts( fixtures::a3() ) );
        put( "a4.ts", bpn::write_ts( fixtures::a4() ) );
        put( "phi3.cnf", bpn::write_cnf( fixtures::phi3() ) );
        put( "phi4.cnf", bpn::write_cnf( fixtures::phi4() ) );
    }

    void TearDown() override { fs::remove_all( dir ); }

    std::string path( const std::string& name ) const { return ( dir / name ).string(); }

    void put( const std::string& name, const std::string& content ) const
    {
        std::ofstream( path( name ) ) << content;
    }

    std::string get( const std::string& name ) const
    {
        std::ifstream in( path( name ) );
        std::stringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }

    outcome run( const std::string& args ) const
    {
        const auto cmd = std::string( "cd '" ) + dir.string() + "' && '" + BPN_CLI_PATH + "' " + args + " > stdout.txt 2> stderr.txt";
        const int status = std::system( cmd.c_str() );
        return { WIFEXITED( status ) ? WEXITSTATUS( status ) : -1, get( "stdout.txt" ), get( "stderr.txt" ) };
    }
};

const std::string tau = " --type nop,set,swap,free";

} // namespace

TEST_F( Cli, CheckVerdictsAndCounterexamples )
{
    auto r = run( "check feasible a1.ts" + tau );
    EXPECT_EQ( r.code, 0 ) << r.err;
    EXPECT_NE( r.out.find( "feasible: yes" ), std::string::npos );

    r = run( "check essp a2.ts" + tau );
    EXPECT_EQ( r.code, 1 );
    EXPECT_NE( r.out.find( "counterexample: essp a s2" ), std::string::npos ) << r.out;

    r = run( "check ssp a3.ts" + tau );
    EXPECT_EQ( r.code, 1 );
    EXPECT_NE( r.out.find( "counterexample: sp s0 s2" ), std::string::npos ) << r.out;
    EXPECT_NE( r.err.find( "nondeterministic" ), std::string::npos );

    r = run( "check ssp a1.ts --engine sat --type nop,res,swap,used" );
    EXPECT_EQ( r.code, 0 );
    r = run( "check essp a4.ts --engine sat" + tau );
    EXPECT_EQ( r.code, 1 );
}

TEST_F( Cli, CheckSingleAtom )
{
    EXPECT_EQ( run( "check atom a3.ts --atom 'sp s1 s2'" + tau ).code, 0 );
    EXPECT_EQ( run( "check atom a3.ts --atom 'sp s0 s2'" + tau ).code, 1 );
    EXPECT_EQ( run( "check atom a2.ts --atom 'essp a s2'" + tau ).code, 1 );
    EXPECT_EQ( run( "check atom a2.ts --atom 'essp a s9'" + tau ).code, 2 );
    EXPECT_EQ( run( "check atom a2.ts" + tau ).code, 2 );
}

TEST_F( Cli, UsageAndParseErrors )
{
    EXPECT_EQ( run( "check feasible a1.ts" ).code, 2 );
    EXPECT_EQ( run( "check feasible a1.ts --type nop,bogus" ).code, 2 );
    EXPECT_EQ( run( "check maybe a1.ts" + tau ).code, 2 );
    EXPECT_EQ( run( "check feasible missing.ts" + tau ).code, 2 );
    EXPECT_EQ( run( "frobnicate" ).code, 2 );
    EXPECT_EQ( run( "check feasible a1.ts --engine magic" + tau ).code, 2 );
    put( "bad.ts", "ts A\ninit s0\narc s0 a\n" );
    auto r = run( "synth bad.ts" + tau );
    EXPECT_EQ( r.code, 2 );
    EXPECT_NE( r.err.find( "line 3" ), std::string::npos ) << r.err;
}

TEST_F( Cli, BudgetExhaustionIsInconclusive )
{
    std::mt19937 rng( 4 );
    put( "big.ts", bpn::write_ts( fixtures::random_ts( rng, 60, { "a", "b", "c", "d", "e" }, "s", 60 ) ) );
    auto r = run( "check feasible big.ts --engine sat --budget 0.000001" + tau );
    EXPECT_TRUE( r.code == 3 || r.code == 1 ) << r.out;
    if ( r.code == 3 )
    {
        EXPECT_NE( r.out.find( "unresolved:" ), std::string::npos );
    }
}

TEST_F( Cli, SynthesisRoundTrip )
{
    auto r = run( "synth a1.ts -o a1.net" + tau );
    ASSERT_EQ( r.code, 0 ) << r.err;
    auto net = bpn::parse_net( get( "a1.net" ) );
    EXPECT_EQ( net.transitions, std::vector<std::string>{ "a" } );
    ASSERT_EQ( run( "rg a1.net -o a1.rg" ).code, 0 );
    EXPECT_EQ( bpn::parse_ts( get( "a1.rg" ) ), bpn::reachability_graph( net ) );
    EXPECT_EQ( run( "iso a1.rg a1.ts" ).code, 0 );

    r = run( "synth a4.ts" + tau );
    EXPECT_EQ( r.code, 1 );
    EXPECT_NE( r.out.find( "infeasible:" ), std::string::npos );
}

TEST_F( Cli, ReachabilityGraphAndIsomorphism )
{
    put( "loop.net", "net loop\ntype nop,swap\nplace p 0\ntransition t\nflow p t swap\n" );
    auto r = run( "rg loop.net" );
    ASSERT_EQ( r.code, 0 );
    auto rg = bpn::parse_ts( r.out );
    EXPECT_EQ( rg.num_states(), 2u );
    EXPECT_EQ( rg.arcs().size(), 2u );
    EXPECT_EQ( run( "iso a2.ts a2.ts" ).code, 0 );
    EXPECT_EQ( run( "iso a2.ts a4.ts" ).code, 1 );
    put( "bad.net", "net x\ntype nop\nplace p 1\ntransition t\n" );
    EXPECT_EQ( run( "rg bad.net" ).code, 2 );
}

TEST_F( Cli, ReduceSolveAndExtract )
{
    auto r = run( "reduce phi3.cnf --sigma 1 -o phi3.inst" );
    ASSERT_EQ( r.code, 0 ) << r.err;
    auto inst = bpn::parse_instance( get( "phi3.inst" ) );
    EXPECT_EQ( inst.subject().num_states(), 578u );
    EXPECT_EQ( run( "reduce phi3.cnf --sigma 2 --union -o phi3u.inst" ).code, 0 );
    EXPECT_EQ( bpn::parse_instance( get( "phi3u.inst" ) ).members.size(), 39u );

    r = run( "solve13 phi3.cnf" );
    EXPECT_EQ( r.code, 0 );
    EXPECT_EQ( r.out, "x0\n" );
    r = run( "solve13 phi4.cnf" );
    EXPECT_EQ( r.code, 1 );
    EXPECT_EQ( r.out, "UNSAT\n" );

    put( "bad.cnf", "p cnf13 3\nx0 x1 x2\nx0 x1 x2\nx0 x1 x3\n" );
    EXPECT_EQ( run( "reduce bad.cnf --sigma 1" ).code, 2 );
    EXPECT_EQ( run( "solve13 bad.cnf" ).code, 2 );

    r = run( "check atom phi3.inst --atom 'essp k h_{0,2}' --witness phi3.wit" + tau );
    ASSERT_EQ( r.code, 0 ) << r.out << r.err;
    r = run( "extract phi3.wit phi3.inst" );
    EXPECT_EQ( r.code, 0 ) << r.err;
    ASSERT_FALSE( r.out.empty() );
    const auto model = r.out.substr( 0, r.out.size() - 1 );
    EXPECT_TRUE( bpn::is_one_in_three( fixtures::phi3(), { model } ) ) << r.out;

    // tampered witness: a V event no longer swapped
    auto text = get( "phi3.wit" );
    const auto at = text.find( "sig v3 swap" );
    ASSERT_NE( at, std::string::npos );
    text.replace( at, 11, "sig v3 nop" );
    put( "tampered.wit", text );
    r = run( "extract tampered.wit phi3.inst" );
    EXPECT_EQ( r.code, 4 );
    EXPECT_NE( r.err.find( "falsification" ), std::string::npos );

    put( "none.wit", "" );
    EXPECT_EQ( run( "extract none.wit phi3.inst" ).code, 2 );
}

TEST_F( Cli, NegativeInstanceIsInfeasible )
{
    ASSERT_EQ( run( "reduce phi4.cnf --sigma 2 -o phi4.inst" ).code, 0 );
    auto r = run( "check atom phi4.inst --atom 'essp k h_{0,2}' --type nop,set,swap,used" );
    EXPECT_EQ( r.code, 1 ) << r.out;
    r = run( "check feasible phi4.inst --type nop,set,swap,used" );
    EXPECT_EQ( r.code, 1 ) << r.out;
}

TEST_F( Cli, UnionFilesAreCheckedMemberwise )
{
    // two copies of A2 collide on state names and get namespaced
    put( "pair.ts", bpn::write_ts( fixtures::a2() ) + bpn::write_ts( fixtures::a2() ) );
    auto r = run( "check ssp pair.ts" + tau );
    EXPECT_EQ( r.code, 0 ) << r.out << r.err;
    r = run( "check essp pair.ts" + tau );
    EXPECT_EQ( r.code, 1 );
    EXPECT_NE( r.out.find( "essp a 0:s2" ), std::string::npos ) << r.out;
    EXPECT_EQ( run( "synth pair.ts" + tau ).code, 2 );
}
