"""Shortest reset words of finite automata via SAT."""
