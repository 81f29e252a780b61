# Configuration package 