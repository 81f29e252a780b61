# API package 