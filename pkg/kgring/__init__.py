"""Klein-Gordon ring-shaped Kratzer spectrum toolkit"""
