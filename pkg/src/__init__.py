# Source package 