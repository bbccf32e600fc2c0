"""Sequentialization of finite automata networks."""
